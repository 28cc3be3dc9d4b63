//! Reduced integral homology profiles and the graph-to-homology
//! pipeline.
//!
//! Homology is computed from the augmented chain complex, so degree −1
//! exists: the empty complex reports one free summand there and nothing
//! else, a point reports nothing at all, and suspension shifts move
//! degree −1 into degree 0 as they should. Torsion is reported as a
//! multiset of prime powers per degree.

use crate::complex::{boundary_matrix, independence_complex_with, Complex, EnumLimits};
use crate::error::Error;
use crate::graph::Graph;
use crate::matrix::{smith_normal_form_with_deadline, SmithForm};
use crate::reduce::{auto_reduce, ReducedForm, ReductionStatus};
use crate::Result;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

/// Reduced integral homology, degree by degree.
///
/// `betti` holds free ranks, `torsion` the prime-power orders of the
/// finite cyclic summands, both keyed by degree with zero entries
/// omitted. `shift_applied` records a degree shift already incorporated
/// into the keys (from suspension bookkeeping in the pipeline).
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub betti: BTreeMap<i32, u64>,
    pub torsion: BTreeMap<i32, Vec<u64>>,
    #[serde(default)]
    pub shift_applied: u32,
}

impl HomologyProfile {
    /// The all-zero profile (a contractible space).
    pub fn trivial() -> Self {
        HomologyProfile::default()
    }

    pub fn free_rank(&self, q: i32) -> u64 {
        self.betti.get(&q).copied().unwrap_or(0)
    }

    pub fn torsion_at(&self, q: i32) -> &[u64] {
        self.torsion.get(&q).map_or(&[], |v| v.as_slice())
    }

    pub fn is_trivial(&self) -> bool {
        self.betti.is_empty() && self.torsion.is_empty()
    }

    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// Degrees with a nonzero group (free or torsion).
    pub fn support(&self) -> Vec<i32> {
        let mut s: Vec<i32> = self.betti.keys().copied().collect();
        for q in self.torsion.keys() {
            if !s.contains(q) {
                s.push(*q);
            }
        }
        s.sort_unstable();
        s
    }

    /// Shift every degree up by `s` and record it.
    pub fn apply_shift(&mut self, s: u32) {
        if s == 0 {
            return;
        }
        self.betti = std::mem::take(&mut self.betti)
            .into_iter()
            .map(|(q, r)| (q + s as i32, r))
            .collect();
        self.torsion = std::mem::take(&mut self.torsion)
            .into_iter()
            .map(|(q, t)| (q + s as i32, t))
            .collect();
        self.shift_applied += s;
    }

    /// Group-by-group equality, ignoring the shift bookkeeping.
    pub fn same_groups(&self, other: &HomologyProfile) -> bool {
        self.betti == other.betti && self.torsion == other.torsion
    }

    fn add_betti(&mut self, q: i32, r: u64) {
        if r > 0 {
            *self.betti.entry(q).or_insert(0) += r;
        }
    }

    fn add_torsion(&mut self, q: i32, mut t: Vec<u64>) {
        if !t.is_empty() {
            let slot = self.torsion.entry(q).or_default();
            slot.append(&mut t);
            slot.sort_unstable();
        }
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let mut parts = Vec::new();
        for q in self.support() {
            let r = self.free_rank(q);
            let t = self.torsion_at(q);
            let mut s = String::new();
            if r > 0 {
                s.push_str(&format!("Z^{r}"));
            }
            for p in t {
                if !s.is_empty() {
                    s.push('+');
                }
                s.push_str(&format!("Z/{p}"));
            }
            parts.push(format!("H{q}={s}"));
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Split an invariant factor into prime powers.
fn prime_powers(d: &BigUint) -> Result<Vec<u64>> {
    let mut n = u64::try_from(d).map_err(|_| {
        Error::Internal(format!(
            "invariant factor {d} exceeds 64 bits; refusing to factor"
        ))
    })?;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut pe = 1u64;
            while n % p == 0 {
                n /= p;
                pe *= p;
            }
            out.push(pe);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out.sort_unstable();
    Ok(out)
}

/// Reduced homology of an explicit complex.
pub fn reduced_homology(x: &Complex) -> Result<HomologyProfile> {
    reduced_homology_inner(x, None, None)
}

/// As [`reduced_homology`], with a deadline and an optional enumeration
/// cap: when the complex was enumerated only up to dimension `cap`, the
/// groups at degree `cap` and above are not determined and are omitted.
pub(crate) fn reduced_homology_inner(
    x: &Complex,
    deadline: Option<Instant>,
    cap: Option<usize>,
) -> Result<HomologyProfile> {
    let mut profile = HomologyProfile::trivial();
    if x.face_count(0) == 0 {
        // The empty complex: one free summand in degree −1.
        profile.add_betti(-1, 1);
        return Ok(profile);
    }
    let dim = x.dim().expect("nonempty complex");
    let truncated = matches!(cap, Some(c) if dim >= c);
    if truncated && dim == 0 {
        // Only vertices were enumerated; no degree is determined.
        return Ok(profile);
    }
    let top = if truncated { dim - 1 } else { dim };

    // rank[q] = rank of the boundary map leaving degree q; the
    // augmentation gives rank 1 at q = 0 for any nonempty complex.
    let mut rank = vec![0usize; dim + 2];
    rank[0] = 1;
    let mut snfs: Vec<Option<SmithForm>> = vec![None; dim + 1];
    for q in 1..=dim {
        let b = boundary_matrix(x, q)?;
        snfs[q] = Some(smith_normal_form_with_deadline(&b, deadline)?);
        rank[q] = snfs[q].as_ref().unwrap().rank();
    }
    for q in 0..=top {
        let f_q = x.face_count(q);
        let free = f_q - rank[q] - rank[q + 1];
        profile.add_betti(q as i32, free as u64);
        if q < dim {
            let mut t = Vec::new();
            for d in snfs[q + 1].as_ref().unwrap().torsion_divisors() {
                t.extend(prime_powers(&d)?);
            }
            profile.add_torsion(q as i32, t);
        }
    }
    if !truncated {
        // Euler characteristic cross-check on every full computation.
        let euler = x.euler();
        let alt: i64 = (0..=dim as i32)
            .map(|q| {
                let b = profile.free_rank(q) as i64;
                let b = if q == 0 { b + 1 } else { b };
                if q % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum();
        if euler != alt {
            return Err(Error::Internal(format!(
                "euler characteristic mismatch: faces give {euler}, ranks give {alt}"
            )));
        }
    }
    Ok(profile)
}

/// Degree shift (suspension) of a profile.
pub fn suspend(p: &HomologyProfile, s: u32) -> HomologyProfile {
    let mut out = p.clone();
    out.apply_shift(s);
    out
}

/// Wedge sum: groups add degree-wise.
pub fn wedge(parts: &[&HomologyProfile]) -> HomologyProfile {
    let mut out = HomologyProfile::trivial();
    for p in parts {
        for (&q, &r) in &p.betti {
            out.add_betti(q, r);
        }
        for (&q, t) in &p.torsion {
            out.add_torsion(q, t.clone());
        }
    }
    out
}

/// Join of two torsion-free profiles:
/// `H̃_k(X * Y) = ⊕_{i+j=k−1} H̃_i(X) ⊗ H̃_j(Y)`.
///
/// With torsion present the answer would need Tor terms the profile
/// cannot express, so such inputs are refused.
pub fn join(a: &HomologyProfile, b: &HomologyProfile) -> Result<HomologyProfile> {
    if a.has_torsion() || b.has_torsion() {
        return Err(Error::Unsupported(
            "join of profiles with torsion is not defined here (Tor terms)".into(),
        ));
    }
    let mut out = HomologyProfile::trivial();
    for (&i, &ri) in &a.betti {
        for (&j, &rj) in &b.betti {
            out.add_betti(i + j + 1, ri * rj);
        }
    }
    Ok(out)
}

/// Options for the graph-to-homology pipeline.
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Apply homotopy-preserving reductions before enumeration.
    pub reduce: bool,
    /// Cap the enumerated dimension; homology is then reported only for
    /// degrees strictly below the cap.
    pub max_dim: Option<usize>,
    pub max_faces: u64,
    pub max_bytes: u64,
    /// Wall-clock budget for the whole pipeline.
    pub max_millis: Option<u64>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            reduce: true,
            max_dim: None,
            max_faces: 50_000_000,
            max_bytes: 8 << 30,
            max_millis: None,
        }
    }
}

/// How far the reduction stage got.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionSummary {
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub suspension_shift: u32,
    pub contractible: bool,
    pub steps: usize,
}

/// Full pipeline result: the profile plus audit data.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub profile: HomologyProfile,
    pub reduction: ReductionSummary,
    pub faces: u64,
    pub timings_ms: BTreeMap<String, u64>,
}

fn attach_context(e: Error, g: &Graph) -> Error {
    match e {
        Error::Resource { kind, detail } => Error::Resource {
            kind,
            detail: format!(
                "{detail} (while processing reduced graph with {} vertices)",
                g.vertex_count()
            ),
        },
        other => other,
    }
}

/// Run reductions, enumeration, and Smith forms; return everything.
pub fn run_pipeline(g: &Graph, o: &PipelineOptions) -> Result<PipelineReport> {
    let t0 = Instant::now();
    let deadline = o.max_millis.map(|ms| t0 + Duration::from_millis(ms));
    let mut timings = BTreeMap::new();

    let rf: ReducedForm = if o.reduce {
        auto_reduce(g)
    } else {
        ReducedForm::identity(g.clone())
    };
    timings.insert("reduce".into(), t0.elapsed().as_millis() as u64);
    let reduction = ReductionSummary {
        vertices_before: g.vertex_count(),
        vertices_after: rf.graph.vertex_count(),
        suspension_shift: rf.suspension_shift,
        contractible: rf.status == ReductionStatus::Contractible,
        steps: rf.trace.steps.len(),
    };

    if reduction.contractible {
        timings.insert("total".into(), t0.elapsed().as_millis() as u64);
        return Ok(PipelineReport {
            profile: HomologyProfile::trivial(),
            reduction,
            faces: 0,
            timings_ms: timings,
        });
    }

    let t1 = Instant::now();
    let limits = EnumLimits {
        max_faces: o.max_faces,
        max_bytes: o.max_bytes,
        deadline,
    };
    let x = independence_complex_with(&rf.graph, o.max_dim, &limits)
        .map_err(|e| attach_context(e, &rf.graph))?;
    timings.insert("enumerate".into(), t1.elapsed().as_millis() as u64);

    let t2 = Instant::now();
    let mut profile = reduced_homology_inner(&x, deadline, o.max_dim)
        .map_err(|e| attach_context(e, &rf.graph))?;
    profile.apply_shift(rf.suspension_shift);
    timings.insert("homology".into(), t2.elapsed().as_millis() as u64);
    timings.insert("total".into(), t0.elapsed().as_millis() as u64);

    Ok(PipelineReport {
        profile,
        reduction,
        faces: x.total_faces(),
        timings_ms: timings,
    })
}

/// Reduced homology of the independence complex of `g`.
pub fn homology_of_graph(g: &Graph, o: &PipelineOptions) -> Result<HomologyProfile> {
    run_pipeline(g, o).map(|r| r.profile)
}
