//! Admissible values and gaps of the φ function over a searched module
//! class.
//!
//! The searched class is the generator class: simples at non-sink vertices
//! plus local quotients `P(v)/U` over every nonempty proper sub-multiset
//! `U` of a radical, combined into direct sums of boundedly many distinct
//! atoms. This class contains every witness the structural results call
//! for: syzygy shifts of a maximal finite-pd atom realize all values up to
//! the finitistic dimension, a socle-sharing pair realizes the value 1, the
//! sum of the non-sink non-source simples realizes φ-dimension minus one,
//! and its one-step lifts realize the φ-dimension itself. The subset search
//! then settles the remaining values exhaustively within bounds.
//!
//! A reported gap is always class-qualified: `NOT_FOUND_IN_CLASS` says no
//! witness exists among the searched sums, not that no module exists.

mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    dual_free_vertices, findim, gldim, nakayama_check, pd_simples, Atom, HomDim, ModuleClass,
};
use crate::igusa_todorov::{phidim, Engine, EngineError, PhiContext};
use crate::quiver::Quiver;
use crate::Int;

use search::{run_subset_search, SearchProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GapsError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Bounds for the class search. The defaults always admit the witnesses
/// the structural results guarantee (boundary values, φ-dimension).
#[derive(Debug, Clone)]
pub struct SearchBounds {
    /// Maximum number of distinct atoms per direct sum; `None` means the
    /// vertex count.
    pub max_summands: Option<usize>,
    pub include_local_quotients: bool,
    /// Cap on the number of enumerated subsets.
    pub max_support_enumeration: u64,
    pub time_budget: Option<Duration>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_summands: None,
            include_local_quotients: true,
            max_support_enumeration: 1 << 22,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueStatus {
    Admissible { witness: ModuleClass, expr: String },
    NotFoundInClass,
    CertifiedStructural { reason: String },
}

impl ValueStatus {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, ValueStatus::NotFoundInClass)
    }
}

impl Serialize for ValueStatus {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            ValueStatus::Admissible { expr, .. } => {
                let mut s = ser.serialize_struct("ValueStatus", 2)?;
                s.serialize_field("status", "ADMISSIBLE")?;
                s.serialize_field("witness", expr)?;
                s.end()
            }
            ValueStatus::NotFoundInClass => {
                let mut s = ser.serialize_struct("ValueStatus", 1)?;
                s.serialize_field("status", "NOT_FOUND_IN_CLASS")?;
                s.end()
            }
            ValueStatus::CertifiedStructural { reason } => {
                let mut s = ser.serialize_struct("ValueStatus", 2)?;
                s.serialize_field("status", "CERTIFIED_ADMISSIBLE_STRUCTURAL")?;
                s.serialize_field("reason", reason)?;
                s.end()
            }
        }
    }
}

/// Structural certificates that exclude gaps outright.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// Finite global dimension: syzygy shifts realize every value.
    #[serde(rename = "FINITE_GLOBAL_DIMENSION")]
    FiniteGlobalDimension { gldim: usize },
    /// Every vertex has out-degree at least 6 and two vertices share two
    /// distinct arrow targets.
    #[serde(rename = "OUTDEGREE_SIX_PAIRED_TARGETS")]
    OutdegreeSixPairedTargets {
        v: String,
        w: String,
        targets: [String; 2],
    },
    /// Every vertex has out-degree at least 4 including a double arrow, and
    /// two vertices share two distinct arrow targets.
    #[serde(rename = "OUTDEGREE_FOUR_DOUBLE_ARROW_PAIRED_TARGETS")]
    OutdegreeFourDoubleArrow {
        v: String,
        w: String,
        targets: [String; 2],
    },
}

/// Full admissibility report for the values `0..=phidim`.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub phidim: usize,
    pub findim: usize,
    pub statuses: BTreeMap<usize, ValueStatus>,
    pub certificates: Vec<Certificate>,
    pub gap_theorem_ok: bool,
    /// True when the class enumeration completed without hitting the node
    /// cap or the time budget.
    pub exhaustive: bool,
    pub nodes_searched: u64,
}

impl GapReport {
    pub fn candidate_gaps(&self) -> Vec<usize> {
        self.statuses
            .iter()
            .filter(|(_, s)| !s.is_admissible())
            .map(|(&v, _)| v)
            .collect()
    }
}

impl Serialize for GapReport {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut s = ser.serialize_struct("GapReport", 6)?;
        s.serialize_field("phidim", &self.phidim)?;
        s.serialize_field("findim", &self.findim)?;
        let values: BTreeMap<String, &ValueStatus> = self
            .statuses
            .iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        s.serialize_field("values", &values)?;
        s.serialize_field("certificates", &self.certificates)?;
        s.serialize_field("gap_theorem_ok", &self.gap_theorem_ok)?;
        s.serialize_field("exhaustive", &self.exhaustive)?;
        s.end()
    }
}

fn lq_or_simple(q: &Quiver, v: usize, u: &[usize]) -> Atom {
    Atom::local_quotient(q, v, u).expect("targets drawn from the radical")
}

/// All generator-class atoms under the given bounds: simples at non-sinks
/// in vertex order, then local quotients per vertex in sub-multiset order.
/// The flag reports truncation of the local-quotient enumeration.
pub fn generator_classes(q: &Quiver, bounds: &SearchBounds) -> (Vec<Atom>, bool) {
    const ATOM_CAP: usize = 1 << 16;
    let mut atoms: Vec<Atom> = q.non_sinks().into_iter().map(Atom::Simple).collect();
    let mut truncated = false;
    if !bounds.include_local_quotients {
        return (atoms, truncated);
    }
    for v in 0..q.vertex_count() {
        let mut radical: BTreeMap<usize, u64> = BTreeMap::new();
        for t in q.out_targets(v) {
            *radical.entry(t).or_insert(0) += 1;
        }
        if radical.is_empty() {
            continue;
        }
        let targets: Vec<usize> = radical.keys().copied().collect();
        let limits: Vec<u64> = targets.iter().map(|t| radical[t]).collect();
        // Mixed-radix counter over sub-multiset multiplicities, skipping the
        // empty and the full one.
        let mut counter = vec![0u64; targets.len()];
        'outer: loop {
            // Increment.
            let mut i = 0;
            loop {
                if i == counter.len() {
                    break 'outer;
                }
                if counter[i] < limits[i] {
                    counter[i] += 1;
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if counter.iter().zip(&limits).all(|(c, l)| c == l) {
                continue; // the full radical normalizes to the simple
            }
            let mut u = Vec::new();
            for (idx, &t) in targets.iter().enumerate() {
                for _ in 0..counter[idx] {
                    u.push(t);
                }
            }
            let atom = lq_or_simple(q, v, &u);
            debug_assert!(matches!(atom, Atom::LocalQuotient(_, _)));
            atoms.push(atom);
            if atoms.len() >= ATOM_CAP {
                truncated = true;
                break 'outer;
            }
        }
        if truncated {
            break;
        }
    }
    (atoms, truncated)
}

/// Deduplicated syzygy class vectors of the generator atoms.
struct ClassVectors {
    vectors: Vec<Vec<Int>>,
    reps: Vec<Atom>,
    dup_class: Vec<bool>,
    simple_prefix: usize,
    /// A non-projective atom whose syzygy class vector is zero (pd 1), if
    /// any.
    zero_vector_rep: Option<Atom>,
    vector_support: Vec<Vec<usize>>,
    gen_truncated: bool,
}

fn class_vectors(q: &Quiver, ctx: &PhiContext, bounds: &SearchBounds) -> ClassVectors {
    let (atoms, gen_truncated) = generator_classes(q, bounds);
    let mut out = ClassVectors {
        vectors: Vec::new(),
        reps: Vec::new(),
        dup_class: Vec::new(),
        simple_prefix: 0,
        zero_vector_rep: None,
        vector_support: Vec::new(),
        gen_truncated,
    };
    let mut seen: std::collections::HashMap<Vec<Int>, usize> = std::collections::HashMap::new();
    let mut simple_done = false;
    for atom in atoms {
        if !simple_done && !matches!(atom, Atom::Simple(_)) {
            out.simple_prefix = out.vectors.len();
            simple_done = true;
        }
        let v = atom.omega_vector(q, &ctx.non_sinks);
        if v.iter().all(|e| e == &Int::from(0)) {
            if out.zero_vector_rep.is_none() && !atom.is_projective(q) {
                out.zero_vector_rep = Some(atom);
            }
            continue;
        }
        match seen.get(&v) {
            Some(&idx) => out.dup_class[idx] = true,
            None => {
                seen.insert(v.clone(), out.vectors.len());
                out.dup_class.push(false);
                out.reps.push(atom);
                let support = ctx
                    .non_sinks
                    .iter()
                    .zip(&v)
                    .filter(|(_, e)| **e != Int::from(0))
                    .map(|(&vert, _)| vert)
                    .collect();
                out.vector_support.push(support);
                out.vectors.push(v);
            }
        }
    }
    if !simple_done {
        out.simple_prefix = out.vectors.len();
    }
    out
}

/// Constructive witnesses: (φ value, module). Every entry is re-verified
/// against the dual engine by the caller.
fn constructive_seeds(
    q: &Quiver,
    ctx: &PhiContext,
    phidim_value: usize,
) -> Result<Vec<(usize, ModuleClass)>, EngineError> {
    let mut seeds: Vec<(usize, ModuleClass)> = Vec::new();
    if q.vertex_count() > 0 {
        seeds.push((0, ModuleClass::atom(Atom::Projective(0))));
    } else {
        seeds.push((0, ModuleClass::zero()));
    }
    let f = findim(q);
    if f >= 1 {
        // A maximal finite-pd atom; its syzygy shifts realize 1..=f.
        let pd_table = pd_simples(q);
        let atom = (0..q.vertex_count())
            .find(|&v| pd_table[v] == HomDim::Finite(f))
            .map(Atom::Simple)
            .or_else(|| {
                q.arrows()
                    .iter()
                    .find(|a| pd_table[a.target] == HomDim::Finite(f - 1))
                    .map(|a| lq_or_simple(q, a.source, &[a.target]))
            })
            .expect("findim >= 1 is attained by an atom");
        let mut stage = ModuleClass::atom(atom);
        let mut shifted = Vec::new();
        for k in (1..=f).rev() {
            shifted.push((k, stage.clone()));
            if k > 1 {
                stage = stage.syzygy(q);
            }
        }
        seeds.extend(shifted);
    }
    let (self_injective, _) = nakayama_check(q);
    if !self_injective {
        let sd = ModuleClass::sum(dual_free_vertices(q).into_iter().map(Atom::Simple));
        let s_star = ctx.phi(&sd, Engine::Both)?.phi;
        if s_star + 1 != phidim_value {
            return Err(EngineError::Invariant(format!(
                "phidim formula mismatch: phi(sum of dual-free simples) = {s_star} but phidim = {phidim_value}"
            )));
        }
        if s_star >= 1 {
            seeds.push((s_star, sd));
            // One-step lifts: an atom with syzygy exactly S_j per j.
            let mut lift = ModuleClass::zero();
            for j in dual_free_vertices(q) {
                let i = q
                    .in_sources(j)
                    .next()
                    .expect("dual-free vertices have in-arrows");
                lift.add(lq_or_simple(q, i, &[j]), 1);
            }
            seeds.push((s_star + 1, lift));
        }
        if f == 0 {
            let pair = socle_sharing_pair(q).ok_or_else(|| {
                EngineError::Invariant(
                    "no socle-sharing pair found on a non-self-injective algebra with findim 0"
                        .into(),
                )
            })?;
            seeds.push((1, pair));
        }
    }
    Ok(seeds)
}

/// Two distinct non-projective atoms with proportional nonvanishing syzygy
/// class vectors: their direct sum has φ = 1. Exists whenever the algebra
/// is not self-injective and has no module of finite positive pd.
fn socle_sharing_pair(q: &Quiver) -> Option<ModuleClass> {
    for u in 0..q.vertex_count() {
        let sources: Vec<usize> = q.in_sources(u).collect();
        if sources.len() < 2 {
            continue;
        }
        let (v, w) = (sources[0], sources[1]);
        let a = lq_or_simple(q, v, &[u]);
        let b = if w != v {
            lq_or_simple(q, w, &[u])
        } else {
            lq_or_simple(q, v, &[u, u])
        };
        debug_assert_ne!(a, b);
        return Some(ModuleClass::sum([a, b]));
    }
    None
}

struct SearchMeta {
    truncated: bool,
    nodes: u64,
}

fn effective_max_summands(q: &Quiver, bounds: &SearchBounds) -> usize {
    bounds.max_summands.unwrap_or(q.vertex_count())
}

fn deadline_from(bounds: &SearchBounds) -> Option<Instant> {
    bounds.time_budget.map(|d| Instant::now() + d)
}

fn build_problem(
    q: &Quiver,
    ctx: &PhiContext,
    cv: &ClassVectors,
    bounds: &SearchBounds,
    max_size: usize,
    needed_values: Option<BTreeSet<usize>>,
    track_psi: bool,
) -> SearchProblem {
    let filt = ctx.filtration();
    let kernels = filt
        .kernels
        .iter()
        .map(|k| k.rows().to_vec())
        .collect::<Vec<_>>();
    let pd_table = pd_simples(q);
    let pd_finite: Vec<Option<usize>> = pd_table.iter().map(|d| d.finite()).collect();
    let max_finite_pd = pd_finite.iter().flatten().copied().max().unwrap_or(0);
    let out_adj: Vec<Vec<usize>> = (0..q.vertex_count())
        .map(|v| q.out_targets(v).collect())
        .collect();
    SearchProblem {
        ambient: ctx.non_sinks.len(),
        vectors: cv.vectors.clone(),
        simple_prefix: cv.simple_prefix,
        kernels,
        max_size: max_size.min(cv.vectors.len()),
        node_cap: bounds.max_support_enumeration,
        deadline: deadline_from(bounds),
        needed_values,
        track_psi,
        vector_support: cv.vector_support.clone(),
        out_adj,
        pd_finite,
        max_finite_pd,
    }
}

/// Statuses of every value in `0..=phidim`: constructive seeds first, then
/// the exhaustive-within-bounds subset search for whatever is left.
pub fn admissible_values(
    q: &Quiver,
    bounds: &SearchBounds,
) -> Result<(BTreeMap<usize, ValueStatus>, usize, usize), GapsError> {
    let (statuses, meta, phidim_value, findim_value) = admissible_values_impl(q, bounds)?;
    let _ = meta;
    Ok((statuses, phidim_value, findim_value))
}

fn admissible_values_impl(
    q: &Quiver,
    bounds: &SearchBounds,
) -> Result<(BTreeMap<usize, ValueStatus>, SearchMeta, usize, usize), GapsError> {
    let ctx = PhiContext::new(q);
    let phidim_value = phidim(q);
    let findim_value = findim(q);
    let mut statuses: BTreeMap<usize, ValueStatus> = BTreeMap::new();
    for (value, witness) in constructive_seeds(q, &ctx, phidim_value)? {
        if value > phidim_value || statuses.contains_key(&value) {
            continue;
        }
        let got = ctx.phi(&witness, Engine::Both)?.phi;
        if got != value {
            return Err(EngineError::Invariant(format!(
                "constructive witness `{}` evaluated to phi = {got}, expected {value}",
                witness.format(q)
            ))
            .into());
        }
        let expr = witness.format(q);
        statuses.insert(value, ValueStatus::Admissible { witness, expr });
    }
    let needed: BTreeSet<usize> = (0..=phidim_value)
        .filter(|v| !statuses.contains_key(v))
        .collect();
    let mut meta = SearchMeta {
        truncated: false,
        nodes: 0,
    };
    if !needed.is_empty() {
        let cv = class_vectors(q, &ctx, bounds);
        meta.truncated |= cv.gen_truncated;
        let max_size = effective_max_summands(q, bounds);
        let problem = build_problem(q, &ctx, &cv, bounds, max_size, Some(needed.clone()), false);
        let outcome = run_subset_search(&problem);
        meta.truncated |= outcome.truncated;
        meta.nodes = outcome.nodes;
        for value in needed {
            if let Some(idxs) = outcome.witnesses.get(&value) {
                let witness = ModuleClass::sum(idxs.iter().map(|&i| cv.reps[i].clone()));
                let got = ctx.phi(&witness, Engine::Both)?.phi;
                if got != value {
                    return Err(EngineError::Invariant(format!(
                        "search witness `{}` re-evaluated to phi = {got}, expected {value}",
                        witness.format(q)
                    ))
                    .into());
                }
                let expr = witness.format(q);
                statuses.insert(value, ValueStatus::Admissible { witness, expr });
            }
        }
        for value in 0..=phidim_value {
            statuses
                .entry(value)
                .or_insert(ValueStatus::NotFoundInClass);
        }
    }
    Ok((statuses, meta, phidim_value, findim_value))
}

/// Structural certificates excluding gaps.
pub fn structural_no_gap_certificates(q: &Quiver) -> Vec<Certificate> {
    let mut certs = Vec::new();
    if let HomDim::Finite(g) = gldim(q) {
        certs.push(Certificate::FiniteGlobalDimension { gldim: g });
    }
    let n = q.vertex_count();
    if n >= 2 {
        let min_out = (0..n).map(|v| q.out_degree(v)).min().unwrap_or(0);
        let paired = paired_targets(q);
        if min_out >= 6 {
            if let Some((v, w, a, b)) = paired {
                certs.push(Certificate::OutdegreeSixPairedTargets {
                    v: q.vertex_name(v).to_string(),
                    w: q.vertex_name(w).to_string(),
                    targets: [q.vertex_name(a).to_string(), q.vertex_name(b).to_string()],
                });
            }
        }
        if min_out >= 4 && (0..n).all(|v| has_double_arrow(q, v)) {
            if let Some((v, w, a, b)) = paired_targets(q) {
                certs.push(Certificate::OutdegreeFourDoubleArrow {
                    v: q.vertex_name(v).to_string(),
                    w: q.vertex_name(w).to_string(),
                    targets: [q.vertex_name(a).to_string(), q.vertex_name(b).to_string()],
                });
            }
        }
    }
    certs
}

fn has_double_arrow(q: &Quiver, v: usize) -> bool {
    let mut seen = BTreeSet::new();
    for t in q.out_targets(v) {
        if !seen.insert(t) {
            return true;
        }
    }
    false
}

/// Two distinct vertices with two distinct common arrow targets; the target
/// matches may pair up in either order, so unordered common targets suffice.
fn paired_targets(q: &Quiver) -> Option<(usize, usize, usize, usize)> {
    let n = q.vertex_count();
    for v in 0..n {
        let tv: BTreeSet<usize> = q.out_targets(v).collect();
        for w in v + 1..n {
            let tw: BTreeSet<usize> = q.out_targets(w).collect();
            let common: Vec<usize> = tv.intersection(&tw).copied().collect();
            if common.len() >= 2 {
                return Some((v, w, common[0], common[1]));
            }
        }
    }
    None
}

/// Assemble the full report and check the gap theorem: every value not
/// found in the class must lie strictly between findim and phidim, and the
/// boundary values 1 and phidim-1 must have witnesses.
pub fn find_gaps(q: &Quiver, bounds: &SearchBounds) -> Result<GapReport, GapsError> {
    let (mut statuses, meta, phidim_value, findim_value) = admissible_values_impl(q, bounds)?;
    let certificates = structural_no_gap_certificates(q);
    let no_gap_cert = certificates.iter().find(|c| {
        matches!(
            c,
            Certificate::OutdegreeSixPairedTargets { .. }
                | Certificate::OutdegreeFourDoubleArrow { .. }
        )
    });
    if let Some(cert) = no_gap_cert {
        let reason = match cert {
            Certificate::OutdegreeSixPairedTargets { .. } => {
                "every value is realized: out-degree at least 6 with paired targets".to_string()
            }
            Certificate::OutdegreeFourDoubleArrow { .. } => {
                "every value is realized: out-degree at least 4 with double arrows and paired targets"
                    .to_string()
            }
            Certificate::FiniteGlobalDimension { .. } => unreachable!(),
        };
        for status in statuses.values_mut() {
            if !status.is_admissible() {
                *status = ValueStatus::CertifiedStructural {
                    reason: reason.clone(),
                };
            }
        }
    }
    if phidim_value > 0 {
        for boundary in [1, phidim_value.saturating_sub(1).max(1)] {
            if !statuses
                .get(&boundary)
                .map(|s| s.is_admissible())
                .unwrap_or(false)
            {
                return Err(EngineError::Invariant(format!(
                    "no witness for the guaranteed boundary value {boundary}"
                ))
                .into());
            }
        }
    }
    let gap_theorem_ok = statuses
        .iter()
        .filter(|(_, s)| !s.is_admissible())
        .all(|(&v, _)| findim_value < v && v < phidim_value);
    Ok(GapReport {
        phidim: phidim_value,
        findim: findim_value,
        statuses,
        certificates,
        gap_theorem_ok,
        exhaustive: !meta.truncated,
        nodes_searched: meta.nodes,
    })
}

/// Explicit modules with φ = 1 and φ = phidim - 1.
pub fn boundary_witnesses(q: &Quiver) -> Result<(ModuleClass, ModuleClass), GapsError> {
    let phidim_value = phidim(q);
    if phidim_value == 0 {
        return Err(GapsError::Precondition(
            "boundary witnesses need phidim > 0".into(),
        ));
    }
    let ctx = PhiContext::new(q);
    let seeds = constructive_seeds(q, &ctx, phidim_value)?;
    let mut one = None;
    let mut top_minus_one = None;
    for (value, witness) in seeds {
        if value == 1 && one.is_none() {
            one = Some(witness.clone());
        }
        if value == phidim_value - 1 && top_minus_one.is_none() {
            top_minus_one = Some(witness.clone());
        }
    }
    let one = one.ok_or_else(|| {
        GapsError::Engine(EngineError::Invariant(
            "no constructive witness for phi = 1".into(),
        ))
    })?;
    let top = top_minus_one.ok_or_else(|| {
        GapsError::Engine(EngineError::Invariant(
            "no constructive witness for phi = phidim - 1".into(),
        ))
    })?;
    for (w, expect) in [(&one, 1), (&top, phidim_value - 1)] {
        let got = ctx.phi(w, Engine::Both)?.phi;
        if got != expect {
            return Err(EngineError::Invariant(format!(
                "boundary witness `{}` has phi = {got}, expected {expect}",
                w.format(q)
            ))
            .into());
        }
    }
    Ok((one, top))
}

/// Search driver for the partial φ-dimension.
pub(crate) fn partial_phidim_search(q: &Quiver, l: usize, bounds: &SearchBounds) -> (usize, bool) {
    if l == 1 {
        // Single indecomposables: φ = pd when finite, 0 otherwise, so the
        // supremum is the finitistic dimension (exactly).
        return (findim(q), true);
    }
    let (self_injective, _) = nakayama_check(q);
    if self_injective {
        return (0, true);
    }
    let ctx = PhiContext::new(q);
    let cv = class_vectors(q, &ctx, bounds);
    // `l` is this operation's summand bound; `bounds` only shapes the atom
    // class and the enumeration budget.
    let problem = build_problem(q, &ctx, &cv, bounds, l, None, false);
    let outcome = run_subset_search(&problem);
    let mut best = outcome.best_phi_by_size[problem.max_size];
    best = best.max(findim(q));
    if cv.zero_vector_rep.is_some() {
        best = best.max(1);
    }
    let filt = ctx.filtration();
    let never_dying_dup = cv
        .dup_class
        .iter()
        .zip(&cv.vectors)
        .any(|(&dup, v)| dup && !filt.stable_kernel().contains(v));
    if l >= 2 && never_dying_dup {
        best = best.max(1);
    }
    let truncated = outcome.truncated || cv.gen_truncated;
    let exact = !truncated && bounds.include_local_quotients && l >= q.vertex_count();
    (best, exact)
}

/// Search driver for the ψ-dimension lower bound.
pub(crate) fn psidim_lower_search(q: &Quiver, bounds: &SearchBounds) -> usize {
    let ctx = PhiContext::new(q);
    let phidim_value = phidim(q);
    let mut best = findim(q);
    if let Ok(seeds) = constructive_seeds(q, &ctx, phidim_value) {
        for (_, witness) in seeds {
            if let Ok(p) = ctx.psi(&witness) {
                best = best.max(p.psi);
            }
        }
    }
    let cv = class_vectors(q, &ctx, bounds);
    let has_finite_pd = pd_simples(q).iter().any(|d| d.is_finite());
    let problem = build_problem(
        q,
        &ctx,
        &cv,
        bounds,
        effective_max_summands(q, bounds),
        None,
        has_finite_pd,
    );
    let outcome = run_subset_search(&problem);
    best = best.max(outcome.psi_max);
    best = best.max(*outcome.best_phi_by_size.last().unwrap_or(&0));
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::igusa_todorov::{phidim_partial, psidim_lower};

    fn parse(s: &str) -> Quiver {
        Quiver::parse(s).unwrap()
    }

    fn four_vertex() -> Quiver {
        parse("quiver ex5 { vertices: 1 2 3 4; arrows: 1 -> 1; 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 3; 4 -> 4; }")
    }

    #[test]
    fn generator_classes_of_four_vertex() {
        let (atoms, truncated) = generator_classes(&four_vertex(), &SearchBounds::default());
        assert!(!truncated);
        let q = four_vertex();
        let exprs: Vec<String> = atoms.iter().map(|a| a.format(&q)).collect();
        assert_eq!(
            exprs,
            vec!["S(1)", "S(2)", "S(3)", "S(4)", "P(1)/[1]", "P(1)/[2]", "P(4)/[3]", "P(4)/[4]"]
        );
    }

    #[test]
    fn generator_classes_of_a2_is_single_simple() {
        let q = parse("quiver a2 { vertices: 1 2; arrows: 1 -> 2; }");
        let (atoms, _) = generator_classes(&q, &SearchBounds::default());
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0], Atom::Simple(0));
    }

    #[test]
    fn outdegree_count_of_proper_quotients() {
        // A vertex with out-degree d to distinct targets has 2^d - 2 proper
        // local quotients.
        let q = parse("quiver s { vertices: c 1 2 3; arrows: c -> 1; c -> 2; c -> 3; 1 -> c; 2 -> c; 3 -> c; }");
        let (atoms, _) = generator_classes(&q, &SearchBounds::default());
        let lq_at_c = atoms
            .iter()
            .filter(|a| matches!(a, Atom::LocalQuotient(v, _) if q.vertex_name(*v) == "c"))
            .count();
        assert_eq!(lq_at_c, (1 << 3) - 2);
    }

    #[test]
    fn four_vertex_gap_report() {
        let report = find_gaps(&four_vertex(), &SearchBounds::default()).unwrap();
        assert_eq!(report.phidim, 2);
        assert_eq!(report.findim, 0);
        assert!(report.gap_theorem_ok);
        assert!(report.exhaustive);
        assert!(report.candidate_gaps().is_empty());
        for v in 0..=2 {
            assert!(report.statuses[&v].is_admissible(), "value {v}");
        }
    }

    #[test]
    fn loop_quiver_report_has_only_zero() {
        let q = parse("quiver L { vertices: 1; arrows: 1 -> 1; }");
        let report = find_gaps(&q, &SearchBounds::default()).unwrap();
        assert_eq!(report.phidim, 0);
        assert_eq!(report.statuses.len(), 1);
        assert!(report.statuses[&0].is_admissible());
    }

    #[test]
    fn path_has_finite_gldim_certificate_and_no_gaps() {
        let q = parse("quiver p4 { vertices: 1 2 3 4; arrows: 1 -> 2; 2 -> 3; 3 -> 4; }");
        let report = find_gaps(&q, &SearchBounds::default()).unwrap();
        assert!(report
            .certificates
            .iter()
            .any(|c| matches!(c, Certificate::FiniteGlobalDimension { gldim: 3 })));
        assert!(report.candidate_gaps().is_empty());
        // All values 0..=gldim admissible with syzygy-shift witnesses.
        assert_eq!(report.phidim, 3);
        for v in 0..=3 {
            assert!(report.statuses[&v].is_admissible());
        }
    }

    #[test]
    fn complete_graph_with_loops_fires_outdegree_certificate() {
        let n = 7;
        let vertices: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut arrows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                arrows.push((None, i.to_string(), j.to_string()));
            }
        }
        let q = Quiver::new("k7", vertices, arrows).unwrap();
        let certs = structural_no_gap_certificates(&q);
        assert!(certs
            .iter()
            .any(|c| matches!(c, Certificate::OutdegreeSixPairedTargets { .. })));
        let report = find_gaps(&q, &SearchBounds::default()).unwrap();
        assert!(report.candidate_gaps().is_empty());
    }

    #[test]
    fn four_vertex_partial_dimensions() {
        let q = four_vertex();
        let bounds = SearchBounds::default();
        assert_eq!(phidim_partial(&q, 1, &bounds), (0, true));
        assert_eq!(phidim_partial(&q, 2, &bounds).0, 1);
        assert_eq!(phidim_partial(&q, 3, &bounds).0, 2);
        let (v4, exact4) = phidim_partial(&q, 4, &bounds);
        assert_eq!(v4, 2);
        assert!(exact4);
    }

    #[test]
    fn self_injective_partial_dimensions_vanish() {
        let cycle = parse("quiver c3 { vertices: 1 2 3; arrows: 1 -> 2; 2 -> 3; 3 -> 1; }");
        for l in 1..=4 {
            assert_eq!(
                phidim_partial(&cycle, l, &SearchBounds::default()),
                (0, true)
            );
        }
    }

    #[test]
    fn psidim_lower_examples() {
        let bounds = SearchBounds::default();
        let cycle = parse("quiver c3 { vertices: 1 2 3; arrows: 1 -> 2; 2 -> 3; 3 -> 1; }");
        assert_eq!(psidim_lower(&cycle, &bounds), 0);
        let path =
            parse("quiver p5 { vertices: 1 2 3 4 5; arrows: 1 -> 2; 2 -> 3; 3 -> 4; 4 -> 5; }");
        assert_eq!(psidim_lower(&path, &bounds), 4);
        assert!(psidim_lower(&four_vertex(), &bounds) >= 2);
    }

    #[test]
    fn boundary_witnesses_for_four_vertex() {
        let q = four_vertex();
        let (one, top) = boundary_witnesses(&q).unwrap();
        let ctx = PhiContext::new(&q);
        assert_eq!(ctx.phi(&one, Engine::Both).unwrap().phi, 1);
        assert_eq!(ctx.phi(&top, Engine::Both).unwrap().phi, 1);
    }

    #[test]
    fn boundary_witnesses_need_positive_phidim() {
        let q = parse("quiver L { vertices: 1; arrows: 1 -> 1; }");
        assert!(matches!(
            boundary_witnesses(&q),
            Err(GapsError::Precondition(_))
        ));
    }

    #[test]
    fn report_serialization_schema() {
        let report = find_gaps(&four_vertex(), &SearchBounds::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert!(json.get("phidim").is_some());
        assert!(json.get("findim").is_some());
        assert!(json.get("values").unwrap().get("0").is_some());
        assert!(json.get("certificates").is_some());
        assert!(json.get("gap_theorem_ok").is_some());
        assert!(json.get("exhaustive").is_some());
        assert_eq!(
            json["values"]["0"]["status"].as_str().unwrap(),
            "ADMISSIBLE"
        );
    }

    #[test]
    fn statuses_deterministic() {
        let q = four_vertex();
        let a = find_gaps(&q, &SearchBounds::default()).unwrap();
        let b = find_gaps(&q, &SearchBounds::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
