use super::echelon::Echelon;
use super::matrix::{exact_rank, kernel_basis, Matrix, NonSquare};
use super::subspace::SubspaceBasis;
use crate::scalar::Scalar;

/// The chain `Ker T ⊆ Ker T² ⊆ …` of a square matrix, up to stabilization.
///
/// `kernels[k]` is `Ker T^k` (so `kernels[0]` is the zero space), `dims[k-1]`
/// its dimension, and `new_generators[k-1]` a basis of a complement of
/// `Ker T^{k-1}` inside `Ker T^k`. `stabilization_index` is the least `k`
/// with `Ker T^k = Ker T^{k+1}`; for an invertible matrix it is 0 and the
/// lists are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelFiltration<S: Scalar> {
    pub dims: Vec<usize>,
    pub new_generators: Vec<Vec<Vec<S>>>,
    pub stabilization_index: usize,
    pub kernels: Vec<SubspaceBasis<S>>,
}

impl<S: Scalar> KernelFiltration<S> {
    pub fn stable_kernel(&self) -> &SubspaceBasis<S> {
        self.kernels.last().unwrap()
    }

    /// Least `k` with `v ∈ Ker T^k`, if any.
    pub fn level_of(&self, v: &[S]) -> Option<usize> {
        (0..self.kernels.len()).find(|&k| self.kernels[k].contains(v))
    }
}

pub fn kernel_filtration<S: Scalar>(t: &Matrix<S>) -> Result<KernelFiltration<S>, NonSquare> {
    if t.rows() != t.cols() {
        return Err(NonSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let n = t.rows();
    let mut kernels = vec![SubspaceBasis::zero(n)];
    let mut dims = Vec::new();
    let mut new_generators = Vec::new();
    let mut power = Matrix::identity(n);
    loop {
        power = power.mul(t);
        let k = kernel_basis(&power);
        let prev = kernels.last().unwrap();
        if k.dim() == prev.dim() {
            break;
        }
        // Complement generators: rows of the new kernel independent of the
        // previous one.
        let mut ech = Echelon::new(n);
        for r in prev.rows() {
            ech.insert(r.clone()).expect("scalar overflow");
        }
        let mut gens = Vec::new();
        for r in k.rows() {
            if ech.insert(r.clone()).expect("scalar overflow").is_some() {
                gens.push(ech.rows().last().unwrap().clone());
            }
        }
        debug_assert_eq!(gens.len(), k.dim() - prev.dim());
        dims.push(k.dim());
        new_generators.push(gens);
        kernels.push(k);
        assert!(
            kernels.len() <= n + 1,
            "kernel filtration failed to stabilize within the ambient dimension"
        );
    }
    Ok(KernelFiltration {
        dims,
        new_generators,
        stabilization_index: kernels.len() - 1,
        kernels,
    })
}

/// Ranks `r_k = rk { t^{k-1} g : g ∈ gens }` for `k = 1..=cutoff`.
///
/// The sequence is weakly decreasing; with `cutoff = ambient + 1` the last
/// window being flat certifies stabilization (the Fitting bound: from the
/// `ambient`-th power on, the vectors live in the eventual image where `t`
/// acts invertibly).
pub fn iterated_image_ranks<S: Scalar>(
    t: &Matrix<S>,
    gens: &[Vec<S>],
    cutoff: usize,
) -> Vec<usize> {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    for g in gens {
        assert_eq!(g.len(), t.cols(), "generator/matrix dimension mismatch");
    }
    let mut current: Vec<Vec<S>> = gens.to_vec();
    let mut out = Vec::with_capacity(cutoff);
    for k in 0..cutoff {
        out.push(exact_rank(&Matrix::from_rows(current.clone())));
        if k + 1 < cutoff {
            current = current.iter().map(|g| t.apply(g)).collect();
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] >= w[1]));
    out
}
