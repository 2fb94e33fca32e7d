//! Finite quivers: parsing, validation, serialization, transforms, and the
//! graph analytics the algebra layer consumes.
//!
//! Vertices are arbitrary string identifiers; their declaration order fixes
//! the basis index used everywhere downstream. Parallel arrows and loops are
//! allowed and stored as distinct records so labels survive round trips.

mod analysis;
mod parse;
mod transform;

pub use analysis::{analyze_vertices, VertexProfile};
pub(crate) use analysis::{longest_path_table, reaches_cycle_table};
pub use parse::ParseError;
pub use transform::{
    one_point_extension, opposite_quiver, separated_quiver, successor_closed_subquiver,
    TransformError,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex identifier `{0}`")]
    DuplicateVertex(String),
    #[error("arrow endpoint `{0}` is not a declared vertex")]
    UndeclaredVertex(String),
}

/// An arrow of a quiver, endpoints stored as vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub label: Option<String>,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver. Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<String>,
        arrows: Vec<(Option<String>, String, String)>,
    ) -> Result<Self, QuiverError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut arrs = Vec::with_capacity(arrows.len());
        for (label, s, t) in arrows {
            let source = *index
                .get(&s)
                .ok_or_else(|| QuiverError::UndeclaredVertex(s.clone()))?;
            let target = *index
                .get(&t)
                .ok_or_else(|| QuiverError::UndeclaredVertex(t.clone()))?;
            arrs.push(Arrow {
                label,
                source,
                target,
            });
        }
        Ok(Quiver {
            name: name.into(),
            vertices,
            index,
            arrows: arrs,
        })
    }

    /// Construct from vertex names and index pairs; used by the transforms.
    pub(crate) fn from_parts(name: String, vertices: Vec<String>, arrows: Vec<Arrow>) -> Self {
        let index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        debug_assert_eq!(index.len(), vertices.len());
        debug_assert!(arrows
            .iter()
            .all(|a| a.source < vertices.len() && a.target < vertices.len()));
        Quiver {
            name,
            vertices,
            index,
            arrows,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse::parse_quiver(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.target == v).count()
    }

    pub fn out_targets(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .filter(move |a| a.source == v)
            .map(|a| a.target)
    }

    pub fn in_sources(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .filter(move |a| a.target == v)
            .map(|a| a.source)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_degree(v) == 0
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.in_degree(v) == 0
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.is_sink(v))
            .collect()
    }

    /// Vertices that are not sinks, in declaration order. These index the
    /// coordinate space the transfer matrix acts on after projectivization.
    pub fn non_sinks(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| !self.is_sink(v))
            .collect()
    }

    /// Weak connectivity (arrows taken as undirected edges).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for a in &self.arrows {
            adj[a.source].push(a.target);
            adj[a.target].push(a.source);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Single-line canonical serialization; `parse` round-trips it exactly.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("quiver {} {{ vertices:", self.name);
        for v in &self.vertices {
            out.push(' ');
            out.push_str(v);
        }
        out.push_str("; arrows:");
        for a in &self.arrows {
            out.push(' ');
            if let Some(l) = &a.label {
                out.push_str(l);
                out.push_str(": ");
            }
            out.push_str(&format!(
                "{} -> {};",
                self.vertices[a.source], self.vertices[a.target]
            ));
        }
        out.push_str(" }");
        out
    }
}

/// JSON shape: `{name, vertices: [...], arrows: [{label?, source, target}]}`.
#[derive(Debug, Serialize, Deserialize)]
struct QuiverJson {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<ArrowJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArrowJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    source: String,
    target: String,
}

impl Serialize for Quiver {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> Result<Ser::Ok, Ser::Error> {
        QuiverJson {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowJson {
                    label: a.label.clone(),
                    source: self.vertices[a.source].clone(),
                    target: self.vertices[a.target].clone(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = QuiverJson::deserialize(de)?;
        Quiver::new(
            raw.name,
            raw.vertices,
            raw.arrows
                .into_iter()
                .map(|a| (a.label, a.source, a.target))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
