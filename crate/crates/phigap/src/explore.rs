//! Seeded random exploration: generate quivers, compute their invariants,
//! and check the structural properties on every sample.
//!
//! Output is deterministic for a fixed config: each sample derives its own
//! generator from `(seed, index)` via independent streams, so generation
//! order is irrelevant.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::HomDim;
use crate::gaps::{boundary_witnesses, SearchBounds};
use crate::igusa_todorov::{phidim, phidim_partial};
use crate::quiver::{opposite_quiver, Quiver};
use crate::report::AlgebraReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExploreFormat {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone)]
pub struct ExploreConfig {
    pub num_vertices: usize,
    pub arrow_count: usize,
    pub allow_loops: bool,
    pub samples: u64,
    pub seed: u64,
    pub format: ExploreFormat,
}

/// Uniform multigraph: `arrows` arrows sampled i.i.d. over the ordered
/// vertex pairs (excluding the diagonal when loops are off). A single
/// vertex without loops admits no arrows.
pub fn random_quiver(
    name: &str,
    num_vertices: usize,
    arrow_count: usize,
    allow_loops: bool,
    rng: &mut impl Rng,
) -> Quiver {
    assert!(num_vertices >= 1);
    let vertices: Vec<String> = (0..num_vertices).map(|i| i.to_string()).collect();
    let mut arrows = Vec::with_capacity(arrow_count);
    let can_draw = allow_loops || num_vertices > 1;
    if can_draw {
        for _ in 0..arrow_count {
            loop {
                let s = rng.gen_range(0..num_vertices);
                let t = rng.gen_range(0..num_vertices);
                if !allow_loops && s == t {
                    continue;
                }
                arrows.push((None, s.to_string(), t.to_string()));
                break;
            }
        }
    }
    Quiver::new(name, vertices, arrows).expect("generated arrows are valid")
}

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyVerdicts {
    pub phidim_le_n: bool,
    pub self_injective_iff_phidim_zero: bool,
    pub self_injective_iff_phidim2_zero: bool,
    pub boundary_witnesses_exist: bool,
    pub phidim_equals_opposite: bool,
}

impl PropertyVerdicts {
    pub fn all_ok(&self) -> bool {
        self.phidim_le_n
            && self.self_injective_iff_phidim_zero
            && self.self_injective_iff_phidim2_zero
            && self.boundary_witnesses_exist
            && self.phidim_equals_opposite
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExploreRecord {
    pub index: u64,
    pub vertices: usize,
    pub arrows: usize,
    pub self_injective: bool,
    pub gldim: HomDim,
    pub findim: usize,
    pub phidim: usize,
    pub phidim2: usize,
    pub phidim_opposite: usize,
    pub verdicts: PropertyVerdicts,
    pub ok: bool,
    pub quiver: String,
}

pub fn evaluate_sample(q: &Quiver, index: u64) -> ExploreRecord {
    let report = AlgebraReport::compute(q);
    let bounds = SearchBounds::default();
    let (phidim2, _) = phidim_partial(q, 2, &bounds);
    let op = opposite_quiver(q);
    let phidim_op = phidim(&op);
    let boundary_ok = if report.phidim == 0 {
        true
    } else {
        boundary_witnesses(q).is_ok()
    };
    let verdicts = PropertyVerdicts {
        phidim_le_n: report.phidim <= q.vertex_count(),
        self_injective_iff_phidim_zero: report.self_injective == (report.phidim == 0),
        self_injective_iff_phidim2_zero: report.self_injective == (phidim2 == 0),
        boundary_witnesses_exist: boundary_ok,
        phidim_equals_opposite: report.phidim == phidim_op,
    };
    let ok = verdicts.all_ok();
    ExploreRecord {
        index,
        vertices: q.vertex_count(),
        arrows: q.arrow_count(),
        self_injective: report.self_injective,
        gldim: report.gldim,
        findim: report.findim,
        phidim: report.phidim,
        phidim2,
        phidim_opposite: phidim_op,
        verdicts,
        ok,
        quiver: q.to_dsl(),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str =
    "index,vertices,arrows,self_injective,gldim,findim,phidim,phidim2,phidim_opposite,ok,quiver";

fn csv_line(r: &ExploreRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.index,
        r.vertices,
        r.arrows,
        r.self_injective,
        r.gldim,
        r.findim,
        r.phidim,
        r.phidim2,
        r.phidim_opposite,
        r.ok,
        csv_quote(&r.quiver)
    )
}

/// Run the exploration; returns true when every property verdict held.
pub fn run_explore(config: &ExploreConfig, out: &mut impl Write) -> io::Result<bool> {
    let mut all_ok = true;
    if config.format == ExploreFormat::Csv && config.samples > 0 {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for index in 0..config.samples {
        let mut rng = sample_rng(config.seed, index);
        let q = random_quiver(
            &format!("sample{index}"),
            config.num_vertices,
            config.arrow_count,
            config.allow_loops,
            &mut rng,
        );
        let record = evaluate_sample(&q, index);
        all_ok &= record.ok;
        match config.format {
            ExploreFormat::Jsonl => writeln!(out, "{}", serde_json::to_string(&record).unwrap())?,
            ExploreFormat::Csv => writeln!(out, "{}", csv_line(&record))?,
        }
    }
    Ok(all_ok)
}
