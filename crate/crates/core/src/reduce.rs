//! Homotopy-preserving graph reductions.
//!
//! Three facts drive everything here, all about the independence
//! complex `I(G)`:
//!
//! 1. **Fold**: if `N(u) ⊆ N(v)` for some `u ≠ v`, then
//!    `I(G) ≃ I(G − v)`. (Such a `u` is never adjacent to `v`, since a
//!    neighbor would put `v` inside its own neighborhood.)
//! 2. **Cone**: an isolated vertex belongs to every maximal independent
//!    set, so `I(G)` is a cone — contractible.
//! 3. **Cofiber**: if `I(G − N[v])` is contractible, the inclusion
//!    `I(G − v) ↪ I(G)` is a homotopy equivalence, so `v` may be
//!    deleted.
//!
//! The engine applies these to a fixpoint in a deterministic order
//! (ascending vertex index, restart after every removal) so that equal
//! graphs always produce equal traces. Contractibility testing is
//! sufficient-only: it folds and looks for an isolated vertex, which is
//! exactly the pattern the underlying arguments use, and never claims
//! contractibility wrongly.
//!
//! Separately, [`star_cluster_complex`] implements the suspension
//! identity: for a non-isolated vertex `v` lying in no triangle,
//! `I(G) ≃ Σ(st(v) ∩ SC(v))`, and the intersection is written out as an
//! explicit complex. This is a verification tool, not part of the
//! automatic reduction loop.

use crate::complex::Complex;
use crate::error::Error;
use crate::graph::Graph;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Which rewrite produced a trace step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionRule {
    Fold,
    Cofiber,
    Cone,
}

/// One rewrite: the rule, the vertices that justified it, and the
/// vertices it removed (labels, so the step stays meaningful after
/// renumbering).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionStep {
    pub rule: ReductionRule,
    pub witness: Vec<String>,
    pub removed: Vec<String>,
}

/// The full rewrite history; replaying the removals against the
/// original graph reproduces the reduced graph.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Whether reduction proved the complex contractible or merely stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionStatus {
    Open,
    Contractible,
}

/// Result of a reduction run. When `status` is `Open`, the original
/// complex and `graph`'s complex have the same reduced homology up to a
/// degree shift of `suspension_shift`; `Contractible` means all reduced
/// homology of the original vanishes.
#[derive(Clone, Debug)]
pub struct ReducedForm {
    pub graph: Graph,
    pub suspension_shift: u32,
    pub status: ReductionStatus,
    pub trace: ReductionTrace,
}

impl ReducedForm {
    /// The do-nothing reduction (used when reductions are disabled).
    pub fn identity(g: Graph) -> ReducedForm {
        ReducedForm {
            graph: g,
            suspension_shift: 0,
            status: ReductionStatus::Open,
            trace: ReductionTrace::default(),
        }
    }
}

/// Outcome of a contractibility test: sound, not complete.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Contractible,
    Unknown,
}

/// First foldable vertex in scan order: the smallest `v` for which some
/// `u ≠ v` has `N(u) ⊆ N(v)`, with the smallest such `u` as witness.
fn find_fold(g: &Graph) -> Option<(usize, usize)> {
    let n = g.vertex_count();
    for v in 0..n {
        for u in 0..n {
            if u != v && g.neighbor_set(u).is_subset_of(g.neighbor_set(v)) {
                return Some((v, u));
            }
        }
    }
    None
}

/// Fold-only contractibility check on a scratch graph. Returns the
/// label of the isolated vertex that closes the argument, if one turns
/// up.
fn fold_probe(g: &Graph) -> Option<String> {
    let mut g = g.clone();
    loop {
        if let Some(v) = g.isolated_vertex() {
            return Some(g.label(v).to_string());
        }
        match find_fold(&g) {
            Some((v, _)) => g = g.without_vertex(v),
            None => return None,
        }
    }
}

fn reduce_engine(g: &Graph, use_cofiber: bool) -> ReducedForm {
    let mut graph = g.clone();
    let mut trace = ReductionTrace::default();
    loop {
        if let Some(v) = graph.isolated_vertex() {
            trace.steps.push(ReductionStep {
                rule: ReductionRule::Cone,
                witness: vec![graph.label(v).to_string()],
                removed: Vec::new(),
            });
            return ReducedForm {
                graph,
                suspension_shift: 0,
                status: ReductionStatus::Contractible,
                trace,
            };
        }
        if let Some((v, u)) = find_fold(&graph) {
            trace.steps.push(ReductionStep {
                rule: ReductionRule::Fold,
                witness: vec![graph.label(u).to_string()],
                removed: vec![graph.label(v).to_string()],
            });
            graph = graph.without_vertex(v);
            continue;
        }
        if use_cofiber {
            let n = graph.vertex_count();
            let mut fired = false;
            for v in 0..n {
                let rest = graph.without_set(&graph.closed_neighborhood(v));
                if let Some(witness) = fold_probe(&rest) {
                    trace.steps.push(ReductionStep {
                        rule: ReductionRule::Cofiber,
                        witness: vec![witness],
                        removed: vec![graph.label(v).to_string()],
                    });
                    graph = graph.without_vertex(v);
                    fired = true;
                    break;
                }
            }
            if fired {
                continue;
            }
        }
        return ReducedForm {
            graph,
            suspension_shift: 0,
            status: ReductionStatus::Open,
            trace,
        };
    }
}

/// Remove dominated vertices (`N(u) ⊆ N(v)` deletes `v`) until none
/// remain, reporting contractible as soon as any stage has an isolated
/// vertex.
pub fn fold_reduce(g: &Graph) -> ReducedForm {
    reduce_engine(g, false)
}

/// Folds plus cofiber deletions: a vertex `v` goes when the fold probe
/// certifies `I(G − N[v])` contractible.
pub fn cofiber_prune(g: &Graph) -> ReducedForm {
    reduce_engine(g, true)
}

/// The default reduction: folds and cofiber deletions to a fixpoint.
/// The star-cluster transform is deliberately not part of this loop —
/// it changes the ambient object from a graph to a complex and is
/// offered as an explicit verification path instead.
pub fn auto_reduce(g: &Graph) -> ReducedForm {
    reduce_engine(g, true)
}

/// Is `I(g)` contractible? `Contractible` is definitive; `Unknown`
/// genuinely means unknown (the test is fold-to-isolated-vertex, which
/// covers every contractibility argument this engine needs but not all
/// contractible complexes).
pub fn contractibility_probe(g: &Graph) -> Probe {
    if fold_probe(g).is_some() {
        Probe::Contractible
    } else {
        Probe::Unknown
    }
}

/// The complex `st(v) ∩ SC(v)` together with the suspension shift 1:
/// the independence complex of `g` is homotopy equivalent to the
/// suspension of the returned complex.
///
/// Faces are the independent sets `τ ⊆ V ∖ N[v]` admitting a live
/// witness — some `u ∈ N(v)` with `τ ∪ {u}` still independent. Vertices
/// of the returned complex are indexed by the position of the
/// corresponding vertex in ascending `V ∖ N[v]` order. The result can
/// be the empty complex (already for `g = K₂`), whose suspension is
/// `S⁰` via the degree −1 convention in homology.
///
/// Requires `v` non-isolated and in no triangle; both are checked.
pub fn star_cluster_complex(g: &Graph, v: usize) -> Result<(Complex, u32)> {
    if v >= g.vertex_count() {
        return Err(Error::Parameter(format!(
            "vertex {v} out of range for a graph on {} vertices",
            g.vertex_count()
        )));
    }
    if g.degree(v) == 0 {
        return Err(Error::Precondition(format!(
            "star cluster transform needs a non-isolated vertex; `{}` has no neighbors",
            g.label(v)
        )));
    }
    if g.in_triangle(v) {
        return Err(Error::Precondition(format!(
            "star cluster transform needs a triangle-free vertex; `{}` lies in a triangle",
            g.label(v)
        )));
    }

    let closed = g.closed_neighborhood(v);
    let outside: Vec<usize> = (0..g.vertex_count())
        .filter(|w| !closed.contains(*w))
        .collect();
    let witnesses0 = g.neighbor_set(v).clone();

    // Depth-first extension in ascending order; `witnesses` shrinks as τ
    // grows (a witness dies when τ swallows one of its neighbors), so an
    // empty witness set prunes the whole branch.
    struct Dfs<'a> {
        g: &'a Graph,
        outside: &'a [usize],
        complex: Complex,
        face: Vec<u32>,
    }
    impl Dfs<'_> {
        fn extend(&mut self, from: usize, witnesses: &crate::bitset::VertexSet) {
            for (i, &w) in self.outside.iter().enumerate().skip(from) {
                if self
                    .face
                    .iter()
                    .any(|&p| self.g.adjacent(self.outside[p as usize], w))
                {
                    continue;
                }
                let mut alive = witnesses.clone();
                alive.subtract(self.g.neighbor_set(w));
                if alive.is_empty() {
                    continue;
                }
                self.face.push(i as u32);
                self.complex.push_face_in_order(&self.face);
                self.extend(i + 1, &alive);
                self.face.pop();
            }
        }
    }

    let mut dfs = Dfs {
        g,
        outside: &outside,
        complex: Complex::empty(),
        face: Vec::new(),
    };
    dfs.extend(0, &witnesses0);
    Ok((dfs.complex, 1))
}
