use std::collections::BTreeSet;

use thiserror::Error;

use super::{Arrow, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("extension targets must be nonempty")]
    EmptyTargets,
    #[error("keep set must be nonempty")]
    EmptyKeep,
    #[error("arrow {from} -> {to} leaves the keep set")]
    ClosureViolated { from: String, to: String },
}

/// Reverse every arrow. An involution: `opposite(opposite(q)) == q`
/// (the name toggles an `_op` suffix).
pub fn opposite_quiver(q: &Quiver) -> Quiver {
    let arrows = q
        .arrows()
        .iter()
        .map(|a| Arrow {
            label: a.label.clone(),
            source: a.target,
            target: a.source,
        })
        .collect();
    let name = match q.name().strip_suffix("_op") {
        Some(base) => base.to_string(),
        None => format!("{}_op", q.name()),
    };
    Quiver::from_parts(name, q.vertex_names().to_vec(), arrows)
}

/// The separated quiver: vertex set doubled into unprimed and primed copies,
/// each arrow `i -> j` becoming `i -> j'`. The result is bipartite with all
/// arrows from unprimed to primed vertices.
pub fn separated_quiver(q: &Quiver) -> Quiver {
    // Priming must not collide with existing names (e.g. a quiver already
    // containing both `3` and `3'`), so stack apostrophes until fresh.
    let mut ticks = 1;
    let primed: Vec<String> = loop {
        let candidate: Vec<String> = q
            .vertex_names()
            .iter()
            .map(|v| format!("{v}{}", "'".repeat(ticks)))
            .collect();
        if candidate.iter().all(|c| q.vertex_index(c).is_none()) {
            break candidate;
        }
        ticks += 1;
    };
    let n = q.vertex_count();
    let mut vertices = q.vertex_names().to_vec();
    vertices.extend(primed);
    let arrows = q
        .arrows()
        .iter()
        .map(|a| Arrow {
            label: a.label.clone(),
            source: a.source,
            target: n + a.target,
        })
        .collect();
    Quiver::from_parts(format!("{}_sep", q.name()), vertices, arrows)
}

/// Adjoin one fresh source vertex with one arrow to each element of the
/// target multiset. The new vertex is appended last in the order.
pub fn one_point_extension(q: &Quiver, targets: &[String]) -> Result<Quiver, TransformError> {
    if targets.is_empty() {
        return Err(TransformError::EmptyTargets);
    }
    let mut target_idx = Vec::with_capacity(targets.len());
    for t in targets {
        target_idx.push(
            q.vertex_index(t)
                .ok_or_else(|| TransformError::UnknownVertex(t.clone()))?,
        );
    }
    let fresh = (0..)
        .map(|k| {
            if k == 0 {
                "v".to_string()
            } else {
                format!("v{k}")
            }
        })
        .find(|c| q.vertex_index(c).is_none())
        .unwrap();
    let mut vertices = q.vertex_names().to_vec();
    let v = vertices.len();
    vertices.push(fresh);
    let mut arrows = q.arrows().to_vec();
    for t in target_idx {
        arrows.push(Arrow {
            label: None,
            source: v,
            target: t,
        });
    }
    Ok(Quiver::from_parts(
        format!("{}_ext", q.name()),
        vertices,
        arrows,
    ))
}

/// Induced subquiver on a successor-closed vertex set: every arrow leaving a
/// kept vertex must stay inside the set. Relative vertex order is preserved.
pub fn successor_closed_subquiver(
    q: &Quiver,
    keep: &BTreeSet<String>,
) -> Result<Quiver, TransformError> {
    if keep.is_empty() {
        return Err(TransformError::EmptyKeep);
    }
    let mut kept = vec![false; q.vertex_count()];
    for name in keep {
        let i = q
            .vertex_index(name)
            .ok_or_else(|| TransformError::UnknownVertex(name.clone()))?;
        kept[i] = true;
    }
    for a in q.arrows() {
        if kept[a.source] && !kept[a.target] {
            return Err(TransformError::ClosureViolated {
                from: q.vertex_name(a.source).to_string(),
                to: q.vertex_name(a.target).to_string(),
            });
        }
    }
    let mut new_index = vec![usize::MAX; q.vertex_count()];
    let mut vertices = Vec::new();
    for (i, name) in q.vertex_names().iter().enumerate() {
        if kept[i] {
            new_index[i] = vertices.len();
            vertices.push(name.clone());
        }
    }
    let arrows = q
        .arrows()
        .iter()
        .filter(|a| kept[a.source] && kept[a.target])
        .map(|a| Arrow {
            label: a.label.clone(),
            source: new_index[a.source],
            target: new_index[a.target],
        })
        .collect();
    Ok(Quiver::from_parts(
        format!("{}_sub", q.name()),
        vertices,
        arrows,
    ))
}
