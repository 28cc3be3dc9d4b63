//! Named graph families and the textual spec grammar.
//!
//! A family spec is either a single family with parameters or a tensor
//! product of atomic families, written
//!
//! ```text
//! cycle:k=9                      (atomic)
//! cycle-x-complete:k=9,n=3       (tensor product)
//! complete-x-complete-x-complete:n=3,m=3,l=3
//! W:k=5,n=3                      (appendage family)
//! ```
//!
//! Parameters are matched by key and assigned to factors positionally;
//! the expected keys for each position are fixed (`k` for cycles and
//! paths, `n`/`m`/`l` for successive complete factors, and so on), so a
//! misremembered spec fails loudly instead of silently permuting
//! parameters.

use crate::error::Error;
use crate::graph::{Atom, Graph, VertexLabel};
use crate::Result;
use std::fmt;

/// The supported graph families.
///
/// `Complete … Matching` are atomic and may appear as tensor factors.
/// The rest are the appendage families: a path–complete product plus a
/// fixed pattern of extra vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Complete,
    Cycle,
    Path,
    Star,
    Matching,
    W,
    H,
    G,
    Wring,
    Hring,
    Q,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name.to_ascii_lowercase().as_str() {
            "complete" => Some(Family::Complete),
            "cycle" => Some(Family::Cycle),
            "path" => Some(Family::Path),
            "star" => Some(Family::Star),
            "matching" => Some(Family::Matching),
            "w" => Some(Family::W),
            "h" => Some(Family::H),
            "g" => Some(Family::G),
            "wring" | "w-ring" => Some(Family::Wring),
            "hring" | "h-ring" => Some(Family::Hring),
            "q" => Some(Family::Q),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Star => "star",
            Family::Matching => "matching",
            Family::W => "W",
            Family::H => "H",
            Family::G => "G",
            Family::Wring => "Wring",
            Family::Hring => "Hring",
            Family::Q => "Q",
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Family::Complete | Family::Cycle | Family::Path | Family::Star | Family::Matching
        )
    }

    pub fn arity(&self) -> usize {
        match self {
            Family::Complete | Family::Cycle | Family::Path | Family::Star | Family::Matching => 1,
            _ => 2,
        }
    }

    /// Base parameter keys, before de-duplication across factors.
    fn base_keys(&self) -> &'static [&'static str] {
        match self {
            Family::Complete | Family::Star => &["n"],
            Family::Cycle | Family::Path => &["k"],
            Family::Matching => &["q"],
            Family::Q => &["n", "m"],
            _ => &["k", "n"],
        }
    }
}

/// A parsed family spec: one or more factors with their parameters.
/// More than one factor means the tensor product of atomic factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub factors: Vec<(Family, Vec<u32>)>,
}

impl FamilySpec {
    pub fn single(family: Family, params: Vec<u32>) -> Self {
        FamilySpec {
            factors: vec![(family, params)],
        }
    }

    /// Parse a spec string like `cycle-x-complete:k=9,n=3`.
    pub fn parse(text: &str) -> Result<FamilySpec> {
        let text = text.trim();
        let (names, params) = match text.split_once(':') {
            Some((a, b)) => (a, b),
            None => (text, ""),
        };
        let mut factors: Vec<Family> = Vec::new();
        for part in names.split("-x-") {
            let fam = Family::parse(part.trim())
                .ok_or_else(|| Error::Parse(format!("unknown family `{}`", part.trim())))?;
            factors.push(fam);
        }
        if factors.is_empty() {
            return Err(Error::Parse("empty family spec".into()));
        }
        if factors.len() > 1 {
            if let Some(f) = factors.iter().find(|f| !f.is_atomic()) {
                return Err(Error::Parse(format!(
                    "`{}` cannot be a tensor factor; only complete, cycle, path, star, and \
                     matching compose",
                    f.name()
                )));
            }
        }
        let expected = expected_keys(&factors);
        let mut values: Vec<Option<u32>> = vec![None; expected.len()];
        for kv in params.split(',').filter(|s| !s.trim().is_empty()) {
            let (key, val) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            let key = key.trim();
            let val: u32 = val.trim().parse().map_err(|_| {
                Error::Parse(format!("`{}` is not a non-negative integer", val.trim()))
            })?;
            let pos = expected.iter().position(|k| k == key).ok_or_else(|| {
                Error::Parse(format!(
                    "unexpected key `{key}`; this spec takes ({})",
                    expected.join(",")
                ))
            })?;
            if values[pos].replace(val).is_some() {
                return Err(Error::Parse(format!("key `{key}` given twice")));
            }
        }
        if let Some(pos) = values.iter().position(|v| v.is_none()) {
            return Err(Error::Parse(format!(
                "missing parameter `{}`; this spec takes ({})",
                expected[pos],
                expected.join(",")
            )));
        }
        let values: Vec<u32> = values.into_iter().map(|v| v.unwrap()).collect();
        let mut out = Vec::new();
        let mut at = 0;
        for fam in factors {
            let a = fam.arity();
            out.push((fam, values[at..at + a].to_vec()));
            at += a;
        }
        Ok(FamilySpec { factors: out })
    }

    /// Canonical spec text; `parse` of the result round-trips.
    pub fn text(&self) -> String {
        self.to_string()
    }

    /// Build the graph this spec names.
    pub fn build(&self) -> Result<Graph> {
        let (first, params) = &self.factors[0];
        let mut g = if first.is_atomic() {
            build_atomic(*first, params)?
        } else {
            build_family(*first, params)?
        };
        for (fam, params) in &self.factors[1..] {
            g = g.tensor_product(&build_atomic(*fam, params)?);
        }
        Ok(g)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.factors.iter().map(|(fam, _)| fam.name()).collect();
        write!(f, "{}", names.join("-x-"))?;
        let factors: Vec<Family> = self.factors.iter().map(|(f, _)| *f).collect();
        let keys = expected_keys(&factors);
        let values: Vec<u32> = self
            .factors
            .iter()
            .flat_map(|(_, p)| p.iter().copied())
            .collect();
        let pairs: Vec<String> = keys
            .iter()
            .zip(values.iter())
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if !pairs.is_empty() {
            write!(f, ":{}", pairs.join(","))?;
        }
        Ok(())
    }
}

/// Parameter keys for a factor sequence, de-duplicated positionally:
/// successive complete factors take `n`, `m`, `l`; any other repeated
/// key gets a numeric suffix.
fn expected_keys(factors: &[Family]) -> Vec<String> {
    let mut used: Vec<String> = Vec::new();
    for fam in factors {
        for &base in fam.base_keys() {
            let candidates: Vec<String> = if base == "n" {
                vec!["n".into(), "m".into(), "l".into()]
            } else {
                vec![base.to_string()]
            };
            let mut chosen = None;
            for c in &candidates {
                if !used.contains(c) {
                    chosen = Some(c.clone());
                    break;
                }
            }
            let chosen = chosen.unwrap_or_else(|| {
                let mut i = 2;
                loop {
                    let c = format!("{base}{i}");
                    if !used.contains(&c) {
                        break c;
                    }
                    i += 1;
                }
            });
            used.push(chosen);
        }
    }
    used
}

/// Build an atomic family member with canonical labels: `1..size` for
/// complete graphs, stars, and matchings; `u1..uk` for cycles and paths.
pub fn build_atomic(family: Family, params: &[u32]) -> Result<Graph> {
    if params.len() != family.arity() {
        return Err(Error::Parameter(format!(
            "{} takes {} parameter(s), got {}",
            family.name(),
            family.arity(),
            params.len()
        )));
    }
    let idx = |i: u32| VertexLabel::atom(Atom::Index(i));
    let u = |i: u32| VertexLabel::atom(Atom::U(i));
    match family {
        Family::Complete => {
            let n = params[0];
            if n < 1 {
                return Err(Error::Parameter("complete graph needs n >= 1".into()));
            }
            let labels = (1..=n).map(idx).collect();
            let mut edges = Vec::new();
            for a in 0..n as usize {
                for b in a + 1..n as usize {
                    edges.push((a, b));
                }
            }
            Graph::new(labels, &edges)
        }
        Family::Cycle => {
            let k = params[0];
            if k < 3 {
                return Err(Error::Parameter("cycle needs k >= 3".into()));
            }
            let labels = (1..=k).map(u).collect();
            let mut edges: Vec<(usize, usize)> = (0..k as usize - 1).map(|i| (i, i + 1)).collect();
            edges.push((0, k as usize - 1));
            Graph::new(labels, &edges)
        }
        Family::Path => {
            let k = params[0];
            if k < 1 {
                return Err(Error::Parameter("path needs k >= 1".into()));
            }
            let labels = (1..=k).map(u).collect();
            let edges: Vec<(usize, usize)> = (0..k as usize - 1).map(|i| (i, i + 1)).collect();
            Graph::new(labels, &edges)
        }
        Family::Star => {
            let n = params[0];
            if n < 1 {
                return Err(Error::Parameter("star needs n >= 1 leaves".into()));
            }
            let labels = (1..=n + 1).map(idx).collect();
            let edges: Vec<(usize, usize)> = (1..=n as usize).map(|i| (0, i)).collect();
            Graph::new(labels, &edges)
        }
        Family::Matching => {
            let q = params[0];
            if q < 1 {
                return Err(Error::Parameter("matching needs q >= 1 edges".into()));
            }
            let labels = (1..=2 * q).map(idx).collect();
            let edges: Vec<(usize, usize)> = (0..q as usize).map(|i| (2 * i, 2 * i + 1)).collect();
            Graph::new(labels, &edges)
        }
        _ => build_family(family, params),
    }
}

/// Build one of the appendage families.
///
/// All five path-based families start from the tensor product
/// `path(k) × complete(n)` — vertex `(ui,j)` at index `(i-1)*n + (j-1)`
/// — and attach extra vertices:
///
/// * `W`: `v1` adjacent to `(u1,j)` for `j ≠ 2`, `v2` adjacent to
///   `(uk,j)` for `j ≠ 2`.
/// * `H`: as `W` but `v1` adjacent to `(u1,j)` for `j ≥ 2`.
/// * `G`: `H` plus the path `v1 – w1 – w2 – v2`.
/// * `Wring`: `W` plus the path `v1 – w1 – w – w2 – v2`.
/// * `Hring`: `H` plus pendants `w1` at `v1` and `w2` at `v2`.
///
/// `Q` is the induced subgraph of `complete(2) × complete(n) ×
/// complete(m)` on the vertices `(1,b,c)` with `b = 2` or `c = 2` and
/// `(2,b,c)` with `b = 1` or `c = 1`.
pub fn build_family(family: Family, params: &[u32]) -> Result<Graph> {
    if params.len() != family.arity() {
        return Err(Error::Parameter(format!(
            "{} takes {} parameter(s), got {}",
            family.name(),
            family.arity(),
            params.len()
        )));
    }
    match family {
        Family::W | Family::H | Family::G | Family::Wring | Family::Hring => {
            let (k, n) = (params[0], params[1]);
            if k < 2 || n < 3 {
                return Err(Error::Parameter(format!(
                    "{} needs k >= 2 and n >= 3",
                    family.name()
                )));
            }
            let path = build_atomic(Family::Path, &[k])?;
            let complete = build_atomic(Family::Complete, &[n])?;
            let base = path.tensor_product(&complete);
            let (k, n) = (k as usize, n as usize);
            let mut labels: Vec<VertexLabel> = base.labels().to_vec();
            let mut edges = base.edges();
            let pv = |i: usize, j: usize| (i - 1) * n + (j - 1); // (ui, j), 1-based
            let v1 = labels.len();
            labels.push(VertexLabel::atom(Atom::V1));
            let v2 = v1 + 1;
            labels.push(VertexLabel::atom(Atom::V2));
            let v1_skips_color_two = matches!(family, Family::W | Family::Wring);
            for j in 1..=n {
                if j != 2 {
                    edges.push((pv(k, j), v2));
                }
                if (v1_skips_color_two && j != 2) || (!v1_skips_color_two && j >= 2) {
                    edges.push((pv(1, j), v1));
                }
            }
            match family {
                Family::W | Family::H => {}
                Family::G => {
                    let w1 = labels.len();
                    labels.push(VertexLabel::atom(Atom::W1));
                    let w2 = w1 + 1;
                    labels.push(VertexLabel::atom(Atom::W2));
                    edges.extend([(v1, w1), (w1, w2), (w2, v2)]);
                }
                Family::Wring => {
                    let w1 = labels.len();
                    labels.push(VertexLabel::atom(Atom::W1));
                    let wm = w1 + 1;
                    labels.push(VertexLabel::atom(Atom::WMid));
                    let w2 = wm + 1;
                    labels.push(VertexLabel::atom(Atom::W2));
                    edges.extend([(v1, w1), (w1, wm), (wm, w2), (w2, v2)]);
                }
                Family::Hring => {
                    let w1 = labels.len();
                    labels.push(VertexLabel::atom(Atom::W1));
                    let w2 = w1 + 1;
                    labels.push(VertexLabel::atom(Atom::W2));
                    edges.extend([(v1, w1), (v2, w2)]);
                }
                _ => unreachable!(),
            }
            Graph::new(labels, &edges)
        }
        Family::Q => {
            let (n, m) = (params[0], params[1]);
            if n < 2 || m < 2 {
                return Err(Error::Parameter("Q needs n >= 2 and m >= 2".into()));
            }
            let k2 = build_atomic(Family::Complete, &[2])?;
            let kn = build_atomic(Family::Complete, &[n])?;
            let km = build_atomic(Family::Complete, &[m])?;
            let prod = k2.tensor_product(&kn).tensor_product(&km);
            let (n, m) = (n as usize, m as usize);
            // Vertex ((a,b),c) sits at index ((a-1)*n + (b-1))*m + (c-1).
            let mut keep = Vec::new();
            for a in 1..=2usize {
                for b in 1..=n {
                    for c in 1..=m {
                        let wanted = if a == 1 {
                            b == 2 || c == 2
                        } else {
                            b == 1 || c == 1
                        };
                        if wanted {
                            keep.push(((a - 1) * n + (b - 1)) * m + (c - 1));
                        }
                    }
                }
            }
            prod.induced_subgraph(&keep)
        }
        _ => Err(Error::Parameter(format!(
            "{} is atomic; use build_atomic",
            family.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for text in [
            "cycle:k=9",
            "cycle-x-complete:k=9,n=3",
            "complete-x-complete-x-complete:n=3,m=3,l=3",
            "W:k=5,n=3",
            "Q:n=3,m=4",
            "path-x-complete:k=8,n=4",
        ] {
            let spec = FamilySpec::parse(text).unwrap();
            assert_eq!(spec.text(), text);
            assert_eq!(FamilySpec::parse(&spec.text()).unwrap(), spec);
        }
    }

    #[test]
    fn parse_rejects_bad_specs() {
        assert!(FamilySpec::parse("frobnicate:k=3").is_err());
        assert!(FamilySpec::parse("cycle:k=9,n=3").is_err());
        assert!(FamilySpec::parse("cycle-x-complete:k=9").is_err());
        assert!(FamilySpec::parse("cycle-x-complete:n=9,k=3,m=2").is_err());
        assert!(FamilySpec::parse("W-x-complete:k=2,n=3,m=2").is_err());
        assert!(FamilySpec::parse("cycle:k=two").is_err());
    }

    #[test]
    fn atomic_sizes_and_ranges() {
        assert_eq!(
            build_atomic(Family::Complete, &[4]).unwrap().edge_count(),
            6
        );
        assert_eq!(build_atomic(Family::Cycle, &[5]).unwrap().edge_count(), 5);
        assert_eq!(build_atomic(Family::Path, &[5]).unwrap().edge_count(), 4);
        assert_eq!(build_atomic(Family::Star, &[4]).unwrap().vertex_count(), 5);
        assert_eq!(
            build_atomic(Family::Matching, &[3]).unwrap().edge_count(),
            3
        );
        assert!(build_atomic(Family::Cycle, &[2]).is_err());
        assert!(build_atomic(Family::Complete, &[0]).is_err());
    }

    #[test]
    fn h_family_small_case_structure() {
        // k=2, n=3: six product vertices plus v1, v2; v1 sees (u1,2) and
        // (u1,3); v2 sees (u2,1) and (u2,3).
        let h = build_family(Family::H, &[2, 3]).unwrap();
        assert_eq!(h.vertex_count(), 8);
        let v1 = h.index_of_label("v1").unwrap();
        let v2 = h.index_of_label("v2").unwrap();
        let at = |s: &str| h.index_of_label(s).unwrap();
        assert!(h.adjacent(v1, at("(u1,2)")) && h.adjacent(v1, at("(u1,3)")));
        assert!(!h.adjacent(v1, at("(u1,1)")));
        assert!(h.adjacent(v2, at("(u2,1)")) && h.adjacent(v2, at("(u2,3)")));
        assert!(!h.adjacent(v2, at("(u2,2)")));
    }

    #[test]
    fn w_family_skips_color_two_on_both_ends() {
        let w = build_family(Family::W, &[3, 4]).unwrap();
        let v1 = w.index_of_label("v1").unwrap();
        let at = |s: &str| w.index_of_label(s).unwrap();
        assert!(w.adjacent(v1, at("(u1,1)")));
        assert!(!w.adjacent(v1, at("(u1,2)")));
        assert!(w.adjacent(v1, at("(u1,3)")) && w.adjacent(v1, at("(u1,4)")));
        assert_eq!(w.degree(v1), 3);
    }

    #[test]
    fn g_family_adds_connecting_path() {
        let g = build_family(Family::G, &[2, 3]).unwrap();
        assert_eq!(g.vertex_count(), 10);
        let at = |s: &str| g.index_of_label(s).unwrap();
        assert!(g.adjacent(at("v1"), at("w1")));
        assert!(g.adjacent(at("w1"), at("w2")));
        assert!(g.adjacent(at("w2"), at("v2")));
        assert!(!g.adjacent(at("w1"), at("v2")));
    }

    #[test]
    fn ring_families_add_their_extra_paths() {
        let w = build_family(Family::Wring, &[2, 3]).unwrap();
        assert_eq!(w.vertex_count(), 6 + 2 + 3);
        let at = |s: &str| w.index_of_label(s).unwrap();
        assert!(w.adjacent(at("v1"), at("w1")));
        assert!(w.adjacent(at("w1"), at("w")));
        assert!(w.adjacent(at("w"), at("w2")));
        assert!(w.adjacent(at("w2"), at("v2")));

        let h = build_family(Family::Hring, &[2, 3]).unwrap();
        assert_eq!(h.vertex_count(), 6 + 2 + 2);
        let at = |s: &str| h.index_of_label(s).unwrap();
        assert_eq!(h.degree(at("w1")), 1);
        assert_eq!(h.degree(at("w2")), 1);
    }

    #[test]
    fn q_family_vertex_count() {
        // 2(n+m-1) vertices.
        for (n, m) in [(3u32, 3u32), (3, 4), (4, 5), (5, 5)] {
            let q = build_family(Family::Q, &[n, m]).unwrap();
            assert_eq!(q.vertex_count() as u32, 2 * (n + m - 1), "Q({n},{m})");
        }
    }
}
