//! The Igusa-Todorov functions φ and ψ for radical square zero algebras,
//! with two independent engines.
//!
//! Both engines work in the non-sink coordinate space where the class of a
//! module is its multiset of simple composition factors with projective
//! (sink) coordinates deleted, and the syzygy acts as the projectivized
//! transfer matrix `T`.
//!
//! * The *definition* engine tracks the rank sequence `r_0 = ` number of
//!   distinct non-projective summand classes, `r_k = rk { T^{k-1} ω(a) }`
//!   where `ω(a)` is the class vector of the first syzygy of the atom `a`.
//!   φ is the onset of the constant tail; a flat window up to cutoff
//!   `(non-sinks) + 1` certifies stabilization (Fitting bound).
//! * The *filtration* engine reads φ off the kernel chain of `T`: for
//!   values ≥ 2, φ is one more than the deepest kernel layer met by the
//!   span of the `ω`-vectors; the 0/1 cases are delegated to the
//!   definition engine, whose rank test decides them directly.
//!
//! The two routes are algebraically equivalent but implemented
//! independently; `Engine::Both` runs them against each other and treats a
//! disagreement as an internal bug.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    dual_free_vertices, nakayama_check, pd_simples, projectivized_transfer, Atom, ModuleClass,
};
use crate::gaps::SearchBounds;
use crate::linalg::{iterated_image_ranks, kernel_filtration};
use crate::quiver::Quiver;
use crate::{IntKernelFiltration, IntMatrix, IntSubspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Engine {
    Definition,
    Filtration,
    Both,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(
        "phi engine disagreement on `{module}`: definition={definition}, filtration={filtration} (internal bug)"
    )]
    Disagreement {
        module: String,
        definition: usize,
        filtration: usize,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Outcome of a φ evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct PhiComputation {
    /// Distinct non-projective atomic summands with their multiplicities
    /// (recorded but ignored by φ: the generated subgroup only sees
    /// distinct classes).
    pub summands: Vec<(String, u64)>,
    /// `[r_0, r_1, ..., r_cutoff]` from the definition engine.
    pub r_sequence: Vec<usize>,
    pub phi: usize,
    /// Onset of stabilization of the rank sequence (coincides with φ).
    pub eta: usize,
    pub engine: Engine,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsiComputation {
    pub phi: usize,
    /// Largest finite pd among summands of the φ-th syzygy (0 when none).
    pub finite_pd_supremum: usize,
    pub psi: usize,
}

/// Cached per-quiver data shared by φ evaluations.
pub struct PhiContext<'q> {
    pub q: &'q Quiver,
    pub non_sinks: Vec<usize>,
    pub tbar: IntMatrix,
    filtration: std::cell::OnceCell<IntKernelFiltration>,
}

impl<'q> PhiContext<'q> {
    pub fn new(q: &'q Quiver) -> Self {
        let (non_sinks, tbar) = projectivized_transfer(q);
        PhiContext {
            q,
            non_sinks,
            tbar,
            filtration: std::cell::OnceCell::new(),
        }
    }

    pub fn filtration(&self) -> &IntKernelFiltration {
        self.filtration.get_or_init(|| {
            kernel_filtration(&self.tbar).expect("projectivized transfer is square")
        })
    }

    fn omega_vectors(&self, atoms: &[Atom]) -> Vec<Vec<crate::Int>> {
        atoms
            .iter()
            .map(|a| a.omega_vector(self.q, &self.non_sinks))
            .collect()
    }

    /// Definition engine: rank sequence of iterated syzygy shifts.
    pub fn phi_definition(&self, m: &ModuleClass) -> (usize, Vec<usize>) {
        let atoms = m.distinct_nonprojective(self.q);
        let r0 = atoms.len();
        let cutoff = self.non_sinks.len() + 1;
        let mut seq = Vec::with_capacity(cutoff + 1);
        seq.push(r0);
        if atoms.is_empty() {
            seq.extend(std::iter::repeat(0).take(cutoff));
        } else {
            let vectors = self.omega_vectors(&atoms);
            seq.extend(iterated_image_ranks(&self.tbar, &vectors, cutoff));
        }
        let tail = *seq.last().unwrap();
        let phi = seq.iter().position(|&r| r == tail).unwrap();
        debug_assert!(seq[1..].windows(2).all(|w| w[0] >= w[1]));
        (phi, seq)
    }

    /// Filtration engine: deepest kernel layer met by the span of the
    /// `ω`-vectors decides φ ≥ 2; the 0/1 distinction falls back to the
    /// definition engine's rank test.
    pub fn phi_filtration(&self, m: &ModuleClass) -> usize {
        let atoms = m.distinct_nonprojective(self.q);
        if atoms.is_empty() {
            return 0;
        }
        let ambient = self.non_sinks.len();
        let span = IntSubspace::span(ambient, self.omega_vectors(&atoms));
        let filt = self.filtration();
        let stable = span
            .intersect(filt.stable_kernel())
            .expect("equal ambient dimensions");
        let mut last_jump = None;
        let mut prev = 0usize;
        for j in 1..=filt.stabilization_index {
            let g = stable
                .intersect(&filt.kernels[j])
                .expect("equal ambient dimensions")
                .dim();
            if g > prev {
                last_jump = Some(j);
            }
            prev = g;
        }
        match last_jump {
            Some(j) => j + 1,
            None => self.phi_definition(m).0.min(1),
        }
    }

    pub fn phi(&self, m: &ModuleClass, engine: Engine) -> Result<PhiComputation, EngineError> {
        let (phi_def, seq) = self.phi_definition(m);
        let phi = match engine {
            Engine::Definition => phi_def,
            Engine::Filtration => self.phi_filtration(m),
            Engine::Both => {
                let phi_filt = self.phi_filtration(m);
                if phi_filt != phi_def {
                    return Err(EngineError::Disagreement {
                        module: m.format(self.q),
                        definition: phi_def,
                        filtration: phi_filt,
                    });
                }
                phi_def
            }
        };
        let multiplicity_of = |atom: &Atom| {
            m.atoms()
                .find(|(a, _)| *a == atom)
                .map(|(_, mult)| mult)
                .unwrap_or(0)
        };
        let summands = m
            .distinct_nonprojective(self.q)
            .iter()
            .map(|a| (a.format(self.q), multiplicity_of(a)))
            .collect();
        Ok(PhiComputation {
            summands,
            r_sequence: seq,
            phi,
            eta: phi_def,
            engine,
        })
    }

    pub fn psi(&self, m: &ModuleClass) -> Result<PsiComputation, EngineError> {
        let phi = self.phi(m, Engine::Both)?.phi;
        let pd_table = pd_simples(self.q);
        let sup = if phi == 0 {
            m.atoms()
                .filter_map(|(a, _)| a.pd(&pd_table).finite())
                .max()
                .unwrap_or(0)
        } else {
            m.syzygy_support(self.q, phi)
                .into_iter()
                .filter_map(|v| pd_table[v].finite())
                .max()
                .unwrap_or(0)
        };
        Ok(PsiComputation {
            phi,
            finite_pd_supremum: sup,
            psi: phi + sup,
        })
    }
}

pub fn phi(q: &Quiver, m: &ModuleClass, engine: Engine) -> Result<PhiComputation, EngineError> {
    PhiContext::new(q).phi(m, engine)
}

pub fn psi(q: &Quiver, m: &ModuleClass) -> Result<PsiComputation, EngineError> {
    PhiContext::new(q).psi(m)
}

/// The φ-dimension: 0 exactly for self-injective algebras, else one more
/// than φ of the direct sum of the non-projective non-injective simples
/// (empty sum convention: φ(0) = 0). Always at most the vertex count.
pub fn phidim(q: &Quiver) -> usize {
    let (self_injective, _) = nakayama_check(q);
    if self_injective {
        return 0;
    }
    let ctx = PhiContext::new(q);
    let sd = ModuleClass::sum(dual_free_vertices(q).into_iter().map(Atom::Simple));
    let value = ctx
        .phi(&sd, Engine::Both)
        .expect("engine disagreement while computing phidim")
        .phi
        + 1;
    assert!(
        value <= q.vertex_count(),
        "phidim exceeded the vertex count bound"
    );
    value
}

/// Largest φ over direct sums of at most `l` distinct atomic classes from
/// the generator class. The returned flag is true when the value is exact
/// for the whole module category (guaranteed for `l` at least the vertex
/// count with an untruncated default-class search); otherwise the value is
/// a certified lower bound.
pub fn phidim_partial(q: &Quiver, l: usize, bounds: &SearchBounds) -> (usize, bool) {
    assert!(l >= 1, "partial phi-dimension needs l >= 1");
    crate::gaps::partial_phidim_search(q, l, bounds)
}

/// Largest ψ seen over the searched generator-class sums; a lower bound
/// for the ψ-dimension.
pub fn psidim_lower(q: &Quiver, bounds: &SearchBounds) -> usize {
    crate::gaps::psidim_lower_search(q, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_module_expr;

    fn parse(s: &str) -> Quiver {
        Quiver::parse(s).unwrap()
    }

    fn four_vertex() -> Quiver {
        parse("quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }")
    }

    fn phi_of(q: &Quiver, expr: &str) -> usize {
        let m = parse_module_expr(q, expr).unwrap();
        phi(q, &m, Engine::Both).unwrap().phi
    }

    #[test]
    fn four_vertex_phi_values() {
        let q = four_vertex();
        assert_eq!(phi_of(&q, "S(2) + S(3) + S(4)"), 1);
        assert_eq!(phi_of(&q, "P(1)/[2] + S(2) + S(3)"), 2);
        assert_eq!(phi_of(&q, "S(1) + S(2) + S(3) + S(4)"), 1);
        assert_eq!(phi_of(&q, "P(1)"), 0);
    }

    #[test]
    fn four_vertex_rank_sequence() {
        let q = four_vertex();
        let m = parse_module_expr(&q, "S(2) + S(3) + S(4)").unwrap();
        let c = phi(&q, &m, Engine::Both).unwrap();
        assert_eq!(c.r_sequence, vec![3, 2, 2, 2, 2, 2]);
        assert_eq!(c.eta, 1);
    }

    #[test]
    fn multiplicity_invariance() {
        let q = four_vertex();
        assert_eq!(phi_of(&q, "S(1)^5"), phi_of(&q, "S(1)"));
        assert_eq!(phi_of(&q, "S(2)^3 + S(3)"), phi_of(&q, "S(2) + S(3)"));
    }

    #[test]
    fn phi_equals_pd_when_finite() {
        let a2 = parse("quiver a2 { vertices: 1 2; arrows: 1 -> 2; }");
        assert_eq!(phi_of(&a2, "S(1)"), 1);
        assert_eq!(phi_of(&a2, "S(2)"), 0);
        let path = parse("quiver p4 { vertices: 1 2 3 4; arrows: 1 -> 2; 2 -> 3; 3 -> 4; }");
        assert_eq!(phi_of(&path, "S(1)"), 3);
        assert_eq!(phi_of(&path, "P(1)/[2]"), 3);
    }

    #[test]
    fn single_infinite_pd_indecomposable_has_phi_zero() {
        let q = four_vertex();
        for expr in ["S(1)", "S(2)", "S(3)", "S(4)", "P(1)/[2]", "P(4)/[3]"] {
            assert_eq!(phi_of(&q, expr), 0, "{expr}");
        }
    }

    #[test]
    fn psi_examples() {
        let a2 = parse("quiver a2 { vertices: 1 2; arrows: 1 -> 2; }");
        let m = parse_module_expr(&a2, "S(1)").unwrap();
        assert_eq!(psi(&a2, &m).unwrap().psi, 1);

        let q = four_vertex();
        let m = parse_module_expr(&q, "S(2) + S(3) + S(4)").unwrap();
        let p = psi(&q, &m).unwrap();
        assert_eq!(p.phi, 1);
        assert_eq!(p.finite_pd_supremum, 0);
        assert_eq!(p.psi, 1);

        let m = parse_module_expr(&q, "S(1)").unwrap();
        assert_eq!(psi(&q, &m).unwrap().psi, 0);
    }

    #[test]
    fn phidim_examples() {
        assert_eq!(phidim(&four_vertex()), 2);
        assert_eq!(
            phidim(&parse("quiver L { vertices: 1; arrows: 1 -> 1; }")),
            0
        );
        assert_eq!(
            phidim(&parse("quiver a2 { vertices: 1 2; arrows: 1 -> 2; }")),
            1
        );
        // Hereditary path: phidim = gldim.
        assert_eq!(
            phidim(&parse(
                "quiver p5 { vertices: 1 2 3 4 5; arrows: 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 5; }"
            )),
            4
        );
    }

    #[test]
    fn phi_monotone_under_summands() {
        let q = four_vertex();
        assert!(phi_of(&q, "S(2)") <= phi_of(&q, "S(2) + S(3)"));
        assert!(phi_of(&q, "S(2) + S(3)") <= phi_of(&q, "S(2) + S(3) + S(4)"));
    }
}
