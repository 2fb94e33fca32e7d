use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{pd_simples, HomDim};
use crate::quiver::Quiver;
use crate::Int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("module expression error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown vertex `{0}` in module expression")]
    UnknownVertex(String),
    #[error("`{quotient:?}` is not a sub-multiset of the radical of P({v})")]
    NotInRadical { v: String, quotient: Vec<String> },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("module class is not semisimple")]
pub struct NotSemisimple;

/// An atomic module class, up to isomorphism: a simple, an indecomposable
/// projective, or a local quotient `P(v)/U` where `U` is a nonempty proper
/// sub-multiset of the (semisimple) radical of `P(v)`. Quotients of a local
/// module are local, so every atom is indecomposable; its first syzygy is
/// the semisimple module with multiset `U` (empty for projectives, the full
/// radical for simples).
///
/// `LocalQuotient(v, U)` with `U` empty or equal to the whole radical
/// normalizes to `Projective(v)` / `Simple(v)` at construction, so distinct
/// values really are distinct classes. Note that `Simple(v)` at a sink *is*
/// projective; use [`Atom::is_projective`] rather than matching on the
/// variant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Simple(usize),
    Projective(usize),
    LocalQuotient(usize, BTreeMap<usize, u64>),
}

impl Atom {
    /// Build `P(v)/U`, normalizing the boundary cases.
    pub fn local_quotient(q: &Quiver, v: usize, u: &[usize]) -> Result<Atom, ExprError> {
        let mut radical: BTreeMap<usize, u64> = BTreeMap::new();
        for t in q.out_targets(v) {
            *radical.entry(t).or_insert(0) += 1;
        }
        let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
        for &t in u {
            *mult.entry(t).or_insert(0) += 1;
        }
        let fits = mult
            .iter()
            .all(|(t, m)| radical.get(t).copied().unwrap_or(0) >= *m);
        if !fits {
            return Err(ExprError::NotInRadical {
                v: q.vertex_name(v).to_string(),
                quotient: u.iter().map(|&t| q.vertex_name(t).to_string()).collect(),
            });
        }
        Ok(if mult.is_empty() {
            Atom::Projective(v)
        } else if mult == radical {
            Atom::Simple(v)
        } else {
            Atom::LocalQuotient(v, mult)
        })
    }

    pub fn vertex(&self) -> usize {
        match self {
            Atom::Simple(v) | Atom::Projective(v) | Atom::LocalQuotient(v, _) => *v,
        }
    }

    pub fn is_projective(&self, q: &Quiver) -> bool {
        match self {
            Atom::Projective(_) => true,
            Atom::Simple(v) => q.is_sink(*v),
            Atom::LocalQuotient(_, _) => false,
        }
    }

    /// First syzygy as a multiset of simples (vertex -> multiplicity).
    pub fn syzygy_multiset(&self, q: &Quiver) -> BTreeMap<usize, u64> {
        match self {
            Atom::Projective(_) => BTreeMap::new(),
            Atom::Simple(v) => {
                let mut out = BTreeMap::new();
                for t in q.out_targets(*v) {
                    *out.entry(t).or_insert(0) += 1;
                }
                out
            }
            Atom::LocalQuotient(_, u) => u.clone(),
        }
    }

    /// Class vector of the first syzygy in the non-sink coordinate space.
    pub fn omega_vector(&self, q: &Quiver, non_sinks: &[usize]) -> Vec<Int> {
        let syz = self.syzygy_multiset(q);
        non_sinks
            .iter()
            .map(|v| Int::from(syz.get(v).copied().unwrap_or(0)))
            .collect()
    }

    pub fn pd(&self, pd_table: &[HomDim]) -> HomDim {
        match self {
            Atom::Projective(_) => HomDim::Finite(0),
            Atom::Simple(v) => pd_table[*v],
            Atom::LocalQuotient(_, u) => u
                .keys()
                .map(|&t| pd_table[t])
                .max()
                .expect("local quotient has nonempty syzygy")
                .plus_one(),
        }
    }

    pub fn format(&self, q: &Quiver) -> String {
        match self {
            Atom::Simple(v) => format!("S({})", q.vertex_name(*v)),
            Atom::Projective(v) => format!("P({})", q.vertex_name(*v)),
            Atom::LocalQuotient(v, u) => {
                let mut items = Vec::new();
                for (&t, &m) in u {
                    for _ in 0..m {
                        items.push(q.vertex_name(t).to_string());
                    }
                }
                format!("P({})/[{}]", q.vertex_name(*v), items.join(","))
            }
        }
    }
}

/// A finite direct sum of atomic classes with multiplicities; the empty sum
/// is the zero class. Equality is multiset equality of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleClass {
    atoms: BTreeMap<Atom, u64>,
}

impl ModuleClass {
    pub fn zero() -> Self {
        ModuleClass::default()
    }

    pub fn atom(a: Atom) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(a, 1);
        ModuleClass { atoms }
    }

    pub fn add(&mut self, a: Atom, mult: u64) {
        if mult > 0 {
            *self.atoms.entry(a).or_insert(0) += mult;
        }
    }

    pub fn sum<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        let mut out = ModuleClass::zero();
        for a in atoms {
            out.add(a, 1);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Atom, u64)> {
        self.atoms.iter().map(|(a, &m)| (a, m))
    }

    /// Distinct atoms that are nonzero in the class group (multiplicities
    /// dropped, projectives dropped).
    pub fn distinct_nonprojective(&self, q: &Quiver) -> Vec<Atom> {
        self.atoms
            .keys()
            .filter(|a| !a.is_projective(q))
            .cloned()
            .collect()
    }

    pub fn is_semisimple(&self) -> bool {
        self.atoms.keys().all(|a| matches!(a, Atom::Simple(_)))
    }

    /// First syzygy, computed summand-wise. Always semisimple (or zero).
    pub fn syzygy(&self, q: &Quiver) -> ModuleClass {
        let mut out = ModuleClass::zero();
        for (a, mult) in &self.atoms {
            for (t, m) in a.syzygy_multiset(q) {
                out.add(
                    Atom::Simple(t),
                    m.checked_mul(*mult).expect("multiplicity overflow"),
                );
            }
        }
        out
    }

    /// Support of the `k`-th syzygy (set of vertices), avoiding the
    /// multiplicity blowup of iterated syzygies.
    pub fn syzygy_support(&self, q: &Quiver, k: usize) -> Vec<usize> {
        let n = q.vertex_count();
        let mut cur = vec![false; n];
        if k == 0 {
            // Support of the module itself only makes sense for semisimples;
            // callers use k >= 1 otherwise.
            for a in self.atoms.keys() {
                if let Atom::Simple(v) = a {
                    cur[*v] = true;
                }
            }
            return (0..n).filter(|&v| cur[v]).collect();
        }
        for a in self.atoms.keys() {
            for (t, _) in a.syzygy_multiset(q) {
                cur[t] = true;
            }
        }
        for _ in 1..k {
            let mut next = vec![false; n];
            for v in 0..n {
                if cur[v] {
                    for t in q.out_targets(v) {
                        next[t] = true;
                    }
                }
            }
            cur = next;
        }
        (0..n).filter(|&v| cur[v]).collect()
    }

    /// Multiplicity vector over the non-sink vertices; projective (sink)
    /// coordinates are deleted. Only defined for semisimple classes.
    pub fn class_vector(&self, q: &Quiver) -> Result<Vec<Int>, NotSemisimple> {
        if !self.is_semisimple() {
            return Err(NotSemisimple);
        }
        let non_sinks = q.non_sinks();
        let mut v = vec![Int::from(0); non_sinks.len()];
        for (a, mult) in &self.atoms {
            if let Atom::Simple(s) = a {
                if let Some(pos) = non_sinks.iter().position(|&x| x == *s) {
                    v[pos] += Int::from(*mult);
                }
            }
        }
        Ok(v)
    }

    pub fn pd(&self, q: &Quiver) -> HomDim {
        let table = pd_simples(q);
        self.atoms
            .keys()
            .map(|a| a.pd(&table))
            .max()
            .unwrap_or(HomDim::Finite(0))
    }

    pub fn format(&self, q: &Quiver) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (a, m)) in self.atoms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&a.format(q));
            if *m > 1 {
                write!(out, "^{m}").unwrap();
            }
        }
        out
    }
}

/// Parse a module expression: `term (+ term)*` with `term = atom (^ k)?`
/// and `atom = S(v) | P(v) | P(v)/[u,...]`. Vertex identifiers may contain
/// parentheses and commas (`S((1,2))` is the simple at vertex `(1,2)`), so
/// splitting is paren-aware.
pub fn parse_module_expr(q: &Quiver, text: &str) -> Result<ModuleClass, ExprError> {
    let mut p = ExprParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut out = ModuleClass::zero();
    loop {
        p.skip_ws();
        let atom = p.atom(q)?;
        p.skip_ws();
        let mult = if p.eat(b'^') {
            p.skip_ws();
            p.integer()?
        } else {
            1
        };
        out.add(atom, mult);
        p.skip_ws();
        if p.pos >= p.src.len() {
            break;
        }
        if !p.eat(b'+') {
            return Err(p.err("expected `+` or end of expression"));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.pos < self.src.len() && self.src[self.pos] == c {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<u64, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    /// Balanced-paren vertex identifier up to a stop character at depth 0.
    fn vertex_until(&mut self, stops: &[u8]) -> Result<String, ExprError> {
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if depth == 0 && stops.contains(&c) {
                break;
            }
            match c {
                b'(' => depth += 1,
                b')' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| self.err("unbalanced `)`"))?
                }
                _ => {}
            }
            self.pos += 1;
        }
        if depth != 0 {
            return Err(self.err("unbalanced `(`"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .trim()
            .to_string();
        if name.is_empty() {
            return Err(self.err("expected vertex identifier"));
        }
        Ok(name)
    }

    fn vertex_index(&mut self, q: &Quiver, name: &str) -> Result<usize, ExprError> {
        q.vertex_index(name)
            .ok_or_else(|| ExprError::UnknownVertex(name.to_string()))
    }

    fn atom(&mut self, q: &Quiver) -> Result<Atom, ExprError> {
        let kind = if self.eat(b'S') {
            b'S'
        } else if self.eat(b'P') {
            b'P'
        } else {
            return Err(self.err("expected `S(` or `P(`"));
        };
        self.skip_ws();
        if !self.eat(b'(') {
            return Err(self.err("expected `(`"));
        }
        let name = self.vertex_until(&[b')'])?;
        if !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        let v = self.vertex_index(q, &name)?;
        if kind == b'S' {
            return Ok(Atom::Simple(v));
        }
        self.skip_ws();
        if !self.eat(b'/') {
            return Ok(Atom::Projective(v));
        }
        self.skip_ws();
        if !self.eat(b'[') {
            return Err(self.err("expected `[` after `/`"));
        }
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            let name = self.vertex_until(&[b',', b']'])?;
            items.push(self.vertex_index(q, &name)?);
            self.skip_ws();
            if self.eat(b',') {
                continue;
            }
            if self.eat(b']') {
                break;
            }
            return Err(self.err("expected `,` or `]`"));
        }
        Atom::local_quotient(q, v, &items)
    }
}
