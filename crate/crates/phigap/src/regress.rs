//! Regression fixtures: bundled quivers with expected invariants and the
//! harness that evaluates them.
//!
//! Every expectation carries a provenance tag: `reference` for values taken
//! from the source material the fixture reproduces, `computed` for values
//! the engine derived (with notes where the two disagree), `definitional`
//! for values forced by definitions. The harness fails (exit 1 at the CLI)
//! exactly when a `reference` expectation fails.

use serde::Deserialize;

use crate::algebra::{
    findim, gldim, parse_module_expr, simples_partition, transfer_matrix, transfer_return_block,
    HomDim,
};
use crate::gaps::{find_gaps, GapReport, SearchBounds};
use crate::igusa_todorov::{phidim, phidim_partial, Engine, PhiContext};
use crate::linalg::kernel_filtration;
use crate::quiver::Quiver;
use crate::{Int, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Reference,
    Computed,
    Definitional,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Expectation {
    pub provenance: Provenance,
    #[serde(default)]
    pub note: Option<String>,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Phidim {
        value: usize,
    },
    Findim {
        value: usize,
    },
    Gldim {
        value: GldimValue,
    },
    SelfInjective {
        value: bool,
    },
    Partition {
        projective: Vec<String>,
        injective: Vec<String>,
        neither: Vec<String>,
    },
    Phi {
        module: String,
        value: usize,
    },
    Psi {
        module: String,
        value: usize,
    },
    PhidimPartial {
        l: usize,
        value: usize,
    },
    PhidimPartialLt {
        l: usize,
        bound: usize,
    },
    GapNotFound {
        value: usize,
    },
    GapAdmissible {
        value: usize,
    },
    KernelDims {
        dims: Vec<usize>,
    },
    /// The vector lies in `Ker T^step` but not `Ker T^(step-1)`.
    KernelLayerMember {
        vector: String,
        step: usize,
    },
    /// The transfer matrix maps the input combination to the output one.
    TransferAction {
        input: String,
        output: String,
    },
    Syzygy {
        module: String,
        expected: String,
    },
    /// Block of `T^power` on the listed coordinates.
    ReturnBlock {
        coords: Vec<String>,
        power: usize,
        rows: Vec<Vec<i64>>,
    },
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum GldimValue {
    Finite(usize),
    Infinite(String),
}

impl GldimValue {
    fn matches(&self, d: HomDim) -> bool {
        match (self, d) {
            (GldimValue::Finite(v), HomDim::Finite(g)) => *v == g,
            (GldimValue::Infinite(s), HomDim::Infinite) => s == "inf",
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub description: String,
    pub quiver: String,
    #[serde(default)]
    pub notes: Vec<String>,
    pub expectations: Vec<Expectation>,
}

/// Signed linear combination of basis vectors: terms `[k*]vertex` joined by
/// `+`/`-` at parenthesis depth zero (identifiers may contain `+` inside
/// parens).
pub fn parse_vector_expr(q: &Quiver, text: &str) -> Result<Vec<Int>, String> {
    let mut v = vec![Int::from(0); q.vertex_count()];
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut sign = 1i64;
    let mut term = String::new();
    let mut depth = 0usize;
    let apply = |term: &str, sign: i64, v: &mut Vec<Int>| -> Result<(), String> {
        let term = term.trim();
        if term.is_empty() {
            return Err("empty term in vector expression".to_string());
        }
        let (coef, name) = match term.split_once('*') {
            Some((c, n)) => (
                c.trim()
                    .parse::<i64>()
                    .map_err(|_| format!("bad coefficient `{c}`"))?,
                n.trim(),
            ),
            None => (1, term),
        };
        let idx = q
            .vertex_index(name)
            .ok_or_else(|| format!("unknown vertex `{name}`"))?;
        v[idx] += Int::from(sign * coef);
        Ok(())
    };
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        match c {
            '(' => {
                depth += 1;
                term.push(c);
            }
            ')' => {
                depth = depth.checked_sub(1).ok_or("unbalanced `)`")?;
                term.push(c);
            }
            '+' | '-' if depth == 0 => {
                if !term.trim().is_empty() {
                    apply(&term, sign, &mut v)?;
                } else if sign != 1 || !term.is_empty() {
                    return Err("dangling sign in vector expression".to_string());
                }
                sign = if c == '-' { -1 } else { 1 };
                term.clear();
            }
            _ => term.push(c),
        }
        pos += 1;
    }
    apply(&term, sign, &mut v)?;
    Ok(v)
}

struct FixtureContext<'q> {
    q: &'q Quiver,
    gap_report: std::cell::OnceCell<GapReport>,
}

impl<'q> FixtureContext<'q> {
    fn gaps(&self) -> Result<&GapReport, String> {
        if self.gap_report.get().is_none() {
            let report = find_gaps(self.q, &SearchBounds::default()).map_err(|e| e.to_string())?;
            let _ = self.gap_report.set(report);
        }
        Ok(self.gap_report.get().unwrap())
    }
}

fn project_to_non_sinks(q: &Quiver, v: &[Int]) -> Result<Vec<Int>, String> {
    let non_sinks = q.non_sinks();
    for (i, e) in v.iter().enumerate() {
        if q.is_sink(i) && *e != Int::from(0) {
            return Err(format!(
                "vector touches the sink coordinate `{}`",
                q.vertex_name(i)
            ));
        }
    }
    Ok(non_sinks.iter().map(|&i| v[i].clone()).collect())
}

fn evaluate_check(ctx: &FixtureContext, check: &Check) -> Result<(), String> {
    let q = ctx.q;
    match check {
        Check::Phidim { value } => {
            let got = phidim(q);
            if got != *value {
                return Err(format!("phidim = {got}, expected {value}"));
            }
        }
        Check::Findim { value } => {
            let got = findim(q);
            if got != *value {
                return Err(format!("findim = {got}, expected {value}"));
            }
        }
        Check::Gldim { value } => {
            let got = gldim(q);
            if !value.matches(got) {
                return Err(format!("gldim = {got}, expected {value:?}"));
            }
        }
        Check::SelfInjective { value } => {
            let (got, _) = crate::algebra::nakayama_check(q);
            if got != *value {
                return Err(format!("self_injective = {got}, expected {value}"));
            }
        }
        Check::Partition {
            projective,
            injective,
            neither,
        } => {
            let p = simples_partition(q);
            if &p.projective != projective || &p.injective != injective || &p.neither != neither {
                return Err(format!("partition = {p:?}"));
            }
        }
        Check::Phi { module, value } => {
            let m = parse_module_expr(q, module).map_err(|e| e.to_string())?;
            let got = PhiContext::new(q)
                .phi(&m, Engine::Both)
                .map_err(|e| e.to_string())?
                .phi;
            if got != *value {
                return Err(format!("phi({module}) = {got}, expected {value}"));
            }
        }
        Check::Psi { module, value } => {
            let m = parse_module_expr(q, module).map_err(|e| e.to_string())?;
            let got = PhiContext::new(q).psi(&m).map_err(|e| e.to_string())?.psi;
            if got != *value {
                return Err(format!("psi({module}) = {got}, expected {value}"));
            }
        }
        Check::PhidimPartial { l, value } => {
            let (got, _) = phidim_partial(q, *l, &SearchBounds::default());
            if got != *value {
                return Err(format!("phidim_{l} = {got}, expected {value}"));
            }
        }
        Check::PhidimPartialLt { l, bound } => {
            let (got, _) = phidim_partial(q, *l, &SearchBounds::default());
            if got >= *bound {
                return Err(format!("phidim_{l} = {got}, expected < {bound}"));
            }
        }
        Check::GapNotFound { value } => {
            let report = ctx.gaps()?;
            match report.statuses.get(value) {
                Some(s) if !s.is_admissible() => {}
                other => {
                    return Err(format!(
                        "value {value} expected NOT_FOUND_IN_CLASS, got {other:?}"
                    ))
                }
            }
        }
        Check::GapAdmissible { value } => {
            let report = ctx.gaps()?;
            match report.statuses.get(value) {
                Some(s) if s.is_admissible() => {}
                other => return Err(format!("value {value} expected ADMISSIBLE, got {other:?}")),
            }
        }
        Check::KernelDims { dims } => {
            let (_, tbar) = crate::algebra::projectivized_transfer(q);
            let filt = kernel_filtration(&tbar).map_err(|e| e.to_string())?;
            if &filt.dims != dims {
                return Err(format!("kernel dims = {:?}, expected {dims:?}", filt.dims));
            }
        }
        Check::KernelLayerMember { vector, step } => {
            let v = parse_vector_expr(q, vector)?;
            let v = project_to_non_sinks(q, &v)?;
            let (_, tbar) = crate::algebra::projectivized_transfer(q);
            let filt = kernel_filtration(&tbar).map_err(|e| e.to_string())?;
            if *step >= filt.kernels.len() {
                return Err(format!(
                    "step {step} beyond stabilization {}",
                    filt.stabilization_index
                ));
            }
            if !filt.kernels[*step].contains(&v) {
                return Err(format!("`{vector}` not in the step-{step} kernel"));
            }
            if filt.kernels[step - 1].contains(&v) {
                return Err(format!(
                    "`{vector}` already in the step-{} kernel",
                    step - 1
                ));
            }
        }
        Check::TransferAction { input, output } => {
            let vin = parse_vector_expr(q, input)?;
            let vout = parse_vector_expr(q, output)?;
            let t = transfer_matrix(q);
            let got = t.apply(&vin);
            if got != vout {
                return Err(format!("T({input}) != {output}"));
            }
        }
        Check::Syzygy { module, expected } => {
            let m = parse_module_expr(q, module).map_err(|e| e.to_string())?;
            let e = parse_module_expr(q, expected).map_err(|e| e.to_string())?;
            let got = m.syzygy(q);
            if got != e {
                return Err(format!(
                    "syzygy({module}) = {}, expected {expected}",
                    got.format(q)
                ));
            }
        }
        Check::ReturnBlock {
            coords,
            power,
            rows,
        } => {
            let idx: Option<Vec<usize>> = coords.iter().map(|c| q.vertex_index(c)).collect();
            let idx = idx.ok_or("unknown coordinate vertex")?;
            let got = transfer_return_block(q, &idx, *power);
            let want = IntMatrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                    .collect(),
            );
            if got != want {
                return Err(format!("return block =\n{got}expected\n{want}"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RegressOutcome {
    pub lines: Vec<String>,
    pub total: usize,
    pub failures: usize,
    pub reference_failures: usize,
}

pub fn run_fixture(fixture: &Fixture) -> Result<RegressOutcome, String> {
    let q = Quiver::parse(&fixture.quiver).map_err(|e| format!("fixture {}: {e}", fixture.id))?;
    let ctx = FixtureContext {
        q: &q,
        gap_report: std::cell::OnceCell::new(),
    };
    let mut out = RegressOutcome {
        lines: Vec::new(),
        total: 0,
        failures: 0,
        reference_failures: 0,
    };
    for exp in &fixture.expectations {
        out.total += 1;
        let tag = match exp.provenance {
            Provenance::Reference => "reference",
            Provenance::Computed => "computed",
            Provenance::Definitional => "definitional",
        };
        match evaluate_check(&ctx, &exp.check) {
            Ok(()) => out
                .lines
                .push(format!("PASS [{tag}] {}: {:?}", fixture.id, exp.check)),
            Err(msg) => {
                out.failures += 1;
                if exp.provenance == Provenance::Reference {
                    out.reference_failures += 1;
                }
                out.lines
                    .push(format!("FAIL [{tag}] {}: {msg}", fixture.id));
            }
        }
    }
    Ok(out)
}

pub fn run_all(fixtures: &[Fixture]) -> Result<RegressOutcome, String> {
    let mut out = RegressOutcome {
        lines: Vec::new(),
        total: 0,
        failures: 0,
        reference_failures: 0,
    };
    for f in fixtures {
        let r = run_fixture(f)?;
        out.lines.extend(r.lines);
        out.total += r.total;
        out.failures += r.failures;
        out.reference_failures += r.reference_failures;
    }
    Ok(out)
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        vec![$(
            serde_json::from_str::<Fixture>(include_str!(concat!("../fixtures/", $name)))
                .unwrap_or_else(|e| panic!("malformed bundled fixture {}: {e}", $name)),
        )*]
    };
}

/// The bundled regression fixtures, in evaluation order.
pub fn bundled_fixtures() -> Vec<Fixture> {
    bundled![
        "loop.json",
        "a2.json",
        "path5.json",
        "cycle3.json",
        "ex-5-4vertex.json",
        "ex-gap-15.json",
        "ex-gap-pair-A.json",
        "ex-gap-pair-Aop.json",
        "gamma-m4-n6.json",
        "gamma-m6-n6.json",
        "grid-k1-l2.json",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_parse() {
        let fixtures = bundled_fixtures();
        assert_eq!(fixtures.len(), 11);
        for f in &fixtures {
            Quiver::parse(&f.quiver).unwrap_or_else(|e| panic!("{}: {e}", f.id));
            assert!(!f.expectations.is_empty(), "{} has no expectations", f.id);
        }
    }

    #[test]
    fn vector_expr_parses_signed_terms() {
        let q = Quiver::parse("quiver v { vertices: 0 1 2 (k+1,j); arrows: }").unwrap();
        let v = parse_vector_expr(&q, "2*0 - 1 + (k+1,j)").unwrap();
        assert_eq!(
            v,
            vec![Int::from(2), Int::from(-1), Int::from(0), Int::from(1)]
        );
    }

    #[test]
    fn corrupted_expectation_fails_and_names_fixture() {
        let fixture: Fixture = serde_json::from_str(
            r#"{
                "id": "corrupt",
                "description": "harness self-test",
                "quiver": "quiver L { vertices: 1; arrows: 1 -> 1; }",
                "expectations": [
                    {"provenance": "reference", "kind": "phidim", "value": 3}
                ]
            }"#,
        )
        .unwrap();
        let out = run_fixture(&fixture).unwrap();
        assert_eq!(out.reference_failures, 1);
        assert!(out.lines[0].contains("corrupt"));
        assert!(out.lines[0].starts_with("FAIL"));
    }
}
