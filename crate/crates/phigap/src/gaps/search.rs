//! Exhaustive subset search over the generator class.
//!
//! For the values ≥ 2 of the φ function, φ of a direct sum depends only on
//! the span of the syzygy class vectors of its distinct summands, so the
//! search enumerates subsets of *distinct vectors* rather than of atoms.
//! For each subset the engine maintains incrementally:
//!
//! * an echelon over doubled coordinates seeded with `[k | 0]` for a basis
//!   `k` of the stable kernel `K = Ker T^stab`: inserting `[w | w]` for a
//!   chosen vector `w` leaves rows `[0 | v]` exactly for new elements `v`
//!   of `V ∩ K`, where `V` is the span of the chosen vectors;
//! * the profile `g(j) = dim(V ∩ Ker T^j)`, which only changes when such a
//!   `v` appears (intersections with lower kernels factor through `V ∩ K`).
//!
//! φ of the subset is then one more than the last jump of the profile, or
//! 0/1 according to whether the chosen vectors are independent. Pure
//! machine-integer arithmetic is used when the data fits; any overflow
//! aborts the run and the search is redone at arbitrary precision.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;

use crate::linalg::{Echelon, Overflow};
use crate::scalar::Scalar;

pub(crate) struct SearchProblem {
    pub ambient: usize,
    /// Distinct nonzero syzygy class vectors, simple-derived ones first.
    pub vectors: Vec<Vec<BigInt>>,
    pub simple_prefix: usize,
    /// Canonical bases of `Ker T^j`, `j = 0..=stab`.
    pub kernels: Vec<Vec<Vec<BigInt>>>,
    pub max_size: usize,
    pub node_cap: u64,
    pub deadline: Option<Instant>,
    /// Values still needing a witness; when it empties the search may stop.
    pub needed_values: Option<BTreeSet<usize>>,
    pub track_psi: bool,
    /// Per-vector syzygy support as vertex indices (for ψ tracking).
    pub vector_support: Vec<Vec<usize>>,
    /// Full out-adjacency of the quiver (for ψ tracking).
    pub out_adj: Vec<Vec<usize>>,
    /// Finite pd per vertex (for ψ tracking).
    pub pd_finite: Vec<Option<usize>>,
    pub max_finite_pd: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    /// First witness (as vector index sets) per φ value.
    pub witnesses: BTreeMap<usize, Vec<usize>>,
    /// `best_phi_by_size[s]` = max φ over visited subsets of size ≤ s.
    pub best_phi_by_size: Vec<usize>,
    pub truncated: bool,
    pub nodes: u64,
    pub psi_max: usize,
}

pub(crate) fn run_subset_search(p: &SearchProblem) -> SearchOutcome {
    // Machine-integer fast path when everything fits; exact fallback.
    if let Some(out) = try_run::<i64>(p) {
        return out;
    }
    try_run::<BigInt>(p).expect("arbitrary-precision search cannot overflow")
}

fn try_run<S: Scalar>(p: &SearchProblem) -> Option<SearchOutcome> {
    let convert =
        |v: &Vec<BigInt>| -> Option<Vec<S>> { v.iter().map(|e| S::from_bigint(e)).collect() };
    let vectors: Option<Vec<Vec<S>>> = p.vectors.iter().map(convert).collect();
    let kernels: Option<Vec<Vec<Vec<S>>>> = p
        .kernels
        .iter()
        .map(|k| k.iter().map(convert).collect())
        .collect();
    let mut dfs = Dfs {
        p,
        vectors: vectors?,
        kernels: kernels?,
        ech: Echelon::new(2 * p.ambient),
        kj: Vec::new(),
        vinf: Vec::new(),
        profile: vec![0; p.kernels.len()],
        dim_v: 0,
        stack: Vec::new(),
        needed: p.needed_values.clone(),
        out: SearchOutcome {
            witnesses: BTreeMap::new(),
            best_phi_by_size: vec![0; p.max_size + 1],
            truncated: false,
            nodes: 0,
            psi_max: 0,
        },
    };
    match dfs.run() {
        Ok(()) => {
            let mut out = dfs.out;
            for i in 1..out.best_phi_by_size.len() {
                out.best_phi_by_size[i] = out.best_phi_by_size[i].max(out.best_phi_by_size[i - 1]);
            }
            Some(out)
        }
        Err(Overflow) => None,
    }
}

enum Event {
    Dependent,
    Plain,
    Kernel { old_profile: Vec<usize> },
}

struct Dfs<'p, S: Scalar> {
    p: &'p SearchProblem,
    vectors: Vec<Vec<S>>,
    kernels: Vec<Vec<Vec<S>>>,
    ech: Echelon<S>,
    kj: Vec<Echelon<S>>,
    vinf: Vec<Vec<S>>,
    profile: Vec<usize>,
    dim_v: usize,
    stack: Vec<usize>,
    needed: Option<BTreeSet<usize>>,
    out: SearchOutcome,
}

impl<'p, S: Scalar> Dfs<'p, S> {
    fn run(&mut self) -> Result<(), Overflow> {
        let n = self.p.ambient;
        // Seed the doubled echelon with [k | 0] rows for the stable kernel.
        let stable = self.kernels.last().unwrap().clone();
        for k in &stable {
            let mut row = k.clone();
            row.extend(std::iter::repeat(S::zero()).take(n));
            self.ech.insert(row)?;
        }
        // Per-level kernel echelons for profile recomputation.
        for level in &self.kernels {
            let mut e = Echelon::new(n);
            for k in level {
                e.insert(k.clone())?;
            }
            self.kj.push(e);
        }
        if self.p.max_size == 0 || self.vectors.is_empty() {
            return Ok(());
        }
        // Semisimple supports first, then everything.
        let go_on = self.rec(0, self.p.simple_prefix)?;
        if go_on && self.p.simple_prefix < self.vectors.len() {
            let cont = self.rec(0, self.vectors.len())?;
            let _ = cont;
        }
        Ok(())
    }

    fn rec(&mut self, start: usize, limit: usize) -> Result<bool, Overflow> {
        for i in start..limit {
            let event = self.push(i)?;
            self.stack.push(i);
            let mut keep_going = self.visit();
            if keep_going && self.stack.len() < self.p.max_size {
                keep_going = self.rec(i + 1, limit)?;
            }
            self.stack.pop();
            self.pop(event);
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn push(&mut self, i: usize) -> Result<Event, Overflow> {
        let n = self.p.ambient;
        let mut row = self.vectors[i].clone();
        row.extend(self.vectors[i].iter().cloned());
        let inserted = self.ech.insert(row)?;
        match inserted {
            None => Ok(Event::Dependent),
            Some(pivot) => {
                self.dim_v += 1;
                if pivot < n {
                    Ok(Event::Plain)
                } else {
                    let v = self.ech.rows().last().unwrap()[n..].to_vec();
                    self.vinf.push(v);
                    let old_profile = std::mem::take(&mut self.profile);
                    self.profile = self.recompute_profile()?;
                    Ok(Event::Kernel { old_profile })
                }
            }
        }
    }

    fn pop(&mut self, event: Event) {
        match event {
            Event::Dependent => {}
            Event::Plain => {
                self.ech.pop_row();
                self.dim_v -= 1;
            }
            Event::Kernel { old_profile } => {
                self.ech.pop_row();
                self.dim_v -= 1;
                self.vinf.pop();
                self.profile = old_profile;
            }
        }
    }

    fn recompute_profile(&self) -> Result<Vec<usize>, Overflow> {
        let levels = self.kernels.len();
        let mut g = vec![0usize; levels];
        for j in 1..levels {
            if j + 1 == levels {
                g[j] = self.vinf.len();
                break;
            }
            let mut e = self.kj[j].clone();
            let mut independent = 0;
            for v in &self.vinf {
                if e.insert(v.clone())?.is_some() {
                    independent += 1;
                }
            }
            g[j] = self.vinf.len() - independent;
        }
        Ok(g)
    }

    fn current_phi(&self) -> usize {
        let mut last_jump = None;
        for j in 1..self.profile.len() {
            if self.profile[j] > self.profile[j - 1] {
                last_jump = Some(j);
            }
        }
        match last_jump {
            Some(j) => j + 1,
            None => usize::from(self.stack.len() > self.dim_v),
        }
    }

    /// Returns false when the search should stop.
    fn visit(&mut self) -> bool {
        self.out.nodes += 1;
        if self.out.nodes > self.p.node_cap {
            self.out.truncated = true;
            return false;
        }
        if self.out.nodes % 1024 == 0 {
            if let Some(deadline) = self.p.deadline {
                if Instant::now() > deadline {
                    self.out.truncated = true;
                    return false;
                }
            }
        }
        let phi = self.current_phi();
        let size = self.stack.len();
        if self.out.best_phi_by_size[size] < phi {
            self.out.best_phi_by_size[size] = phi;
        }
        if self.p.track_psi {
            let bound = phi + self.p.max_finite_pd;
            if bound > self.out.psi_max {
                let psi = phi + self.subset_finite_pd_sup(phi);
                if psi > self.out.psi_max {
                    self.out.psi_max = psi;
                }
            }
        }
        self.out
            .witnesses
            .entry(phi)
            .or_insert_with(|| self.stack.clone());
        if let Some(needed) = &mut self.needed {
            needed.remove(&phi);
            if needed.is_empty() {
                return false;
            }
        }
        true
    }

    /// Largest finite pd among the simples in the φ-th syzygy of the
    /// current subset (φ ≥ 1; for φ = 0 every summand of a φ = 0 sum has
    /// infinite pd).
    fn subset_finite_pd_sup(&self, phi: usize) -> usize {
        if phi == 0 {
            return 0;
        }
        let nverts = self.p.out_adj.len();
        let mut cur = vec![false; nverts];
        for &i in &self.stack {
            for &v in &self.p.vector_support[i] {
                cur[v] = true;
            }
        }
        for _ in 1..phi {
            let mut next = vec![false; nverts];
            for v in 0..nverts {
                if cur[v] {
                    for &t in &self.p.out_adj[v] {
                        next[t] = true;
                    }
                }
            }
            cur = next;
        }
        (0..nverts)
            .filter(|&v| cur[v])
            .filter_map(|v| self.p.pd_finite[v])
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::projectivized_transfer;
    use crate::linalg::kernel_filtration;
    use crate::quiver::Quiver;

    fn problem_for(q: &Quiver) -> SearchProblem {
        let (non_sinks, tbar) = projectivized_transfer(q);
        let filt = kernel_filtration(&tbar).unwrap();
        let vectors: Vec<Vec<BigInt>> = non_sinks
            .iter()
            .map(|&v| {
                let mut col = vec![BigInt::from(0); non_sinks.len()];
                for t in q.out_targets(v) {
                    if let Some(i) = non_sinks.iter().position(|&x| x == t) {
                        col[i] += 1;
                    }
                }
                col
            })
            .collect();
        let count = vectors.len();
        let supports = vectors
            .iter()
            .map(|v| {
                non_sinks
                    .iter()
                    .zip(v)
                    .filter(|(_, e)| **e != BigInt::from(0))
                    .map(|(&vert, _)| vert)
                    .collect()
            })
            .collect();
        SearchProblem {
            ambient: non_sinks.len(),
            vectors,
            simple_prefix: count,
            kernels: filt.kernels.iter().map(|k| k.rows().to_vec()).collect(),
            max_size: count,
            node_cap: 1 << 20,
            deadline: None,
            needed_values: None,
            track_psi: false,
            vector_support: supports,
            out_adj: (0..q.vertex_count()).map(|v| q.out_targets(v).collect()).collect(),
            pd_finite: vec![None; q.vertex_count()],
            max_finite_pd: 0,
        }
    }

    #[test]
    fn machine_and_bigint_instantiations_agree() {
        let q = Quiver::parse(
            "quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }",
        )
        .unwrap();
        let p = problem_for(&q);
        let fast = try_run::<i64>(&p).expect("fits machine integers");
        let exact = try_run::<BigInt>(&p).expect("arbitrary precision is total");
        assert_eq!(fast.witnesses, exact.witnesses);
        assert_eq!(fast.best_phi_by_size, exact.best_phi_by_size);
        assert_eq!(fast.nodes, exact.nodes);
        assert!(!fast.truncated && !exact.truncated);
    }
}
