//! Semantics of the radical square zero algebra `A = kQ/J²` attached to a
//! quiver: the simple-module partition, the transfer matrix realizing the
//! syzygy action on class vectors, projective/global/finitistic dimension,
//! and self-injectivity via the socle rule.

mod module;

pub use module::{parse_module_expr, Atom, ExprError, ModuleClass, NotSemisimple};

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::quiver::{analyze_vertices, Quiver};
use crate::{Int, IntMatrix};

/// A homological dimension: a natural number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomDim {
    Finite(usize),
    Infinite,
}

impl HomDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            HomDim::Finite(n) => Some(n),
            HomDim::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, HomDim::Finite(_))
    }

    pub fn plus_one(self) -> HomDim {
        match self {
            HomDim::Finite(n) => HomDim::Finite(n + 1),
            HomDim::Infinite => HomDim::Infinite,
        }
    }
}

impl PartialOrd for HomDim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HomDim {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (HomDim::Infinite, HomDim::Infinite) => Ordering::Equal,
            (HomDim::Infinite, _) => Ordering::Greater,
            (_, HomDim::Infinite) => Ordering::Less,
            (HomDim::Finite(a), HomDim::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for HomDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDim::Finite(n) => write!(f, "{n}"),
            HomDim::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for HomDim {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            HomDim::Finite(n) => ser.serialize_u64(*n as u64),
            HomDim::Infinite => ser.serialize_str("inf"),
        }
    }
}

/// The partition of the simples: projective simples are the sinks,
/// injective simples the sources, and the rest spans the first syzygy
/// classes. A vertex that is both source and sink (isolated) lands in the
/// projective class so the three sets stay disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplesPartition {
    pub projective: Vec<String>,
    pub injective: Vec<String>,
    pub neither: Vec<String>,
}

pub fn simples_partition(q: &Quiver) -> SimplesPartition {
    let mut projective = Vec::new();
    let mut injective = Vec::new();
    let mut neither = Vec::new();
    for v in 0..q.vertex_count() {
        let name = q.vertex_name(v).to_string();
        if q.is_sink(v) {
            projective.push(name);
        } else if q.is_source(v) {
            injective.push(name);
        } else {
            neither.push(name);
        }
    }
    SimplesPartition {
        projective,
        injective,
        neither,
    }
}

/// Vertex indices of the `neither` class (not a sink, not a source).
pub fn dual_free_vertices(q: &Quiver) -> Vec<usize> {
    (0..q.vertex_count())
        .filter(|&v| !q.is_sink(v) && !q.is_source(v))
        .collect()
}

/// The transfer matrix: column `i` is the class vector of the first syzygy
/// of the `i`-th simple, i.e. entry `(j, i)` counts the arrows `i -> j`.
pub fn transfer_matrix(q: &Quiver) -> IntMatrix {
    let n = q.vertex_count();
    let mut m = IntMatrix::zero(n, n);
    for a in q.arrows() {
        let cur = m.entry(a.target, a.source).clone();
        *m.entry_mut(a.target, a.source) = cur + Int::from(1);
    }
    m
}

/// The transfer matrix with sink rows and columns deleted. Sink simples are
/// projective, hence zero in the class group, so this is the matrix of the
/// syzygy action on the non-sink coordinate space.
///
/// A source coordinate never occurs in any syzygy vector, so keeping source
/// columns is harmless: that part of the space is simply never populated.
pub fn projectivized_transfer(q: &Quiver) -> (Vec<usize>, IntMatrix) {
    let keep = q.non_sinks();
    let full = transfer_matrix(q);
    let m = full.submatrix(&keep, &keep);
    (keep, m)
}

/// Projective dimensions of all simples, by the syzygy recursion: a sink
/// simple is projective; a simple that reaches a cycle resolves forever;
/// otherwise pd is one more than the maximum over out-neighbors.
pub fn pd_simples(q: &Quiver) -> Vec<HomDim> {
    let cyc = crate::quiver::reaches_cycle_table(q);
    let longest = crate::quiver::longest_path_table(q);
    (0..q.vertex_count())
        .map(|v| {
            if cyc[v] {
                HomDim::Infinite
            } else {
                // On the acyclic part the syzygy recursion is exactly the
                // longest-path recursion.
                HomDim::Finite(longest[v].unwrap())
            }
        })
        .collect()
}

/// Global dimension: infinite as soon as one simple resolves forever, else
/// the maximum projective dimension of a simple. When finite this equals
/// the longest source-to-sink path length; both routes are computed and
/// compared.
pub fn gldim(q: &Quiver) -> HomDim {
    let pds = pd_simples(q);
    let via_pd = pds.iter().copied().max().unwrap_or(HomDim::Finite(0));
    if let HomDim::Finite(m) = via_pd {
        let via_paths = analyze_vertices(q)
            .iter()
            .filter(|p| p.is_source)
            .filter_map(|p| p.longest_terminating_path)
            .max()
            .unwrap_or(0);
        assert_eq!(
            m, via_paths,
            "global dimension disagreement between the syzygy recursion and the path formula"
        );
        assert!(q.vertex_count() == 0 || m <= q.vertex_count() - 1);
    }
    via_pd
}

/// Finitistic dimension, by the closed formula: the largest finite value
/// among the pd of simples and `1 + pd` of arrow targets with finite pd.
/// Every sub-multiset of a radical occurs as the syzygy of a local
/// quotient, so each candidate value is attained.
pub fn findim(q: &Quiver) -> usize {
    let pds = pd_simples(q);
    let mut best = 0;
    for (v, pd) in pds.iter().enumerate() {
        if let HomDim::Finite(m) = pd {
            best = best.max(*m);
            if q.in_degree(v) > 0 {
                best = best.max(m + 1);
            }
        }
    }
    best
}

/// Socle rule: the algebra is self-injective exactly when every projective
/// has simple socle and the vertex map `v -> socle vertex` is a bijection.
/// Returns the permutation (as vertex indices) when it exists.
pub fn nakayama_check(q: &Quiver) -> (bool, Option<Vec<usize>>) {
    let n = q.vertex_count();
    let mut nu = Vec::with_capacity(n);
    for v in 0..n {
        // Soc P(v) is the radical when v is not a sink, and S_v itself when
        // it is.
        let targets: Vec<usize> = q.out_targets(v).collect();
        match targets.len() {
            0 => nu.push(v),
            1 => nu.push(targets[0]),
            _ => return (false, None),
        }
    }
    let mut seen = vec![false; n];
    for &t in &nu {
        if seen[t] {
            return (false, None);
        }
        seen[t] = true;
    }
    (true, Some(nu))
}

/// The block of `T^k` on the given coordinates. Meaningful when `T^k` maps
/// the coordinate subspace into itself (then it is the return map in that
/// basis).
pub fn transfer_return_block(q: &Quiver, coords: &[usize], k: usize) -> IntMatrix {
    let t = transfer_matrix(q);
    let p = t.pow(k).expect("transfer matrix is square");
    p.submatrix(coords, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Quiver {
        Quiver::parse(s).unwrap()
    }

    fn a2() -> Quiver {
        parse("quiver a2 { vertices: 1 2; arrows: 1 -> 2; }")
    }

    fn four_vertex() -> Quiver {
        parse("quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }")
    }

    fn path(n: usize) -> Quiver {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..n)
            .map(|i| (None, i.to_string(), (i + 1).to_string()))
            .collect();
        Quiver::new("path", vertices, arrows).unwrap()
    }

    #[test]
    fn partition_a2() {
        let p = simples_partition(&a2());
        assert_eq!(p.projective, ["2"]);
        assert_eq!(p.injective, ["1"]);
        assert!(p.neither.is_empty());
    }

    #[test]
    fn partition_four_vertex_all_neither() {
        let p = simples_partition(&four_vertex());
        assert!(p.projective.is_empty() && p.injective.is_empty());
        assert_eq!(p.neither.len(), 4);
    }

    #[test]
    fn isolated_vertex_is_projective() {
        let p = simples_partition(&parse("quiver i { vertices: 1; arrows: }"));
        assert_eq!(p.projective, ["1"]);
        assert!(p.injective.is_empty());
    }

    #[test]
    fn transfer_loop() {
        let t = transfer_matrix(&parse("quiver L { vertices: 1; arrows: 1 -> 1; }"));
        assert_eq!(t, IntMatrix::from_i64_rows(&[&[1]]));
    }

    #[test]
    fn transfer_four_vertex_columns() {
        let t = transfer_matrix(&four_vertex());
        let expect =
            IntMatrix::from_i64_rows(&[&[1, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 1]]);
        assert_eq!(t, expect);
    }

    #[test]
    fn pd_values() {
        let pds = pd_simples(&a2());
        assert_eq!(pds, vec![HomDim::Finite(1), HomDim::Finite(0)]);
        let pds = pd_simples(&four_vertex());
        assert!(pds.iter().all(|p| *p == HomDim::Infinite));
        let pds = pd_simples(&path(6));
        assert_eq!(pds[0], HomDim::Finite(5));
    }

    #[test]
    fn gldim_values() {
        assert_eq!(gldim(&path(5)), HomDim::Finite(4));
        assert_eq!(
            gldim(&parse("quiver L { vertices: 1; arrows: 1 -> 1; }")),
            HomDim::Infinite
        );
    }

    #[test]
    fn gldim_dual_formula_on_random_acyclic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2usize..=7);
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            // Arrows only forward: guaranteed acyclic.
            let m = rng.gen_range(0usize..=10);
            let arrows: Vec<(Option<String>, String, String)> = (0..m)
                .map(|_| {
                    let s = rng.gen_range(0..n - 1);
                    let t = rng.gen_range(s + 1..n);
                    (None, format!("v{s}"), format!("v{t}"))
                })
                .collect();
            let q = Quiver::new("r", vertices, arrows).unwrap();
            // gldim() asserts internally that both formulas agree.
            let g = gldim(&q);
            assert!(g.is_finite());
        }
    }

    #[test]
    fn findim_values() {
        assert_eq!(findim(&path(5)), 4);
        assert_eq!(findim(&four_vertex()), 0);
        assert_eq!(findim(&a2()), 1);
    }

    #[test]
    fn nakayama_examples() {
        let (si, nu) = nakayama_check(&parse("quiver L { vertices: 1; arrows: 1 -> 1; }"));
        assert!(si);
        assert_eq!(nu, Some(vec![0]));

        let cycle = parse("quiver c3 { vertices: 1 2 3; arrows: 1 -> 2; 2 -> 3; 3 -> 1; }");
        let (si, nu) = nakayama_check(&cycle);
        assert!(si);
        assert_eq!(nu, Some(vec![1, 2, 0]));

        let (si, nu) = nakayama_check(&four_vertex());
        assert!(!si);
        assert!(nu.is_none());
    }

    #[test]
    fn oriented_cycles_are_self_injective() {
        for n in 1..=6 {
            let vertices: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            let arrows = (0..n)
                .map(|i| (None, i.to_string(), ((i + 1) % n).to_string()))
                .collect();
            let q = Quiver::new("cycle", vertices, arrows).unwrap();
            let (si, nu) = nakayama_check(&q);
            assert!(si);
            let nu = nu.unwrap();
            for i in 0..n {
                assert_eq!(nu[i], (i + 1) % n);
            }
        }
    }
}
