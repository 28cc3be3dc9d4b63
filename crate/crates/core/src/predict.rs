//! Closed-form predictions: every catalogued homotopy type of an
//! independence complex in this project's scope, as an executable
//! wedge-of-spheres generator.
//!
//! Each rule carries a stable name (reported in errors and in sweep
//! records) and a proven parameter range. Outside the proven range the
//! caller must opt in via [`PredictOptions::allow_conjecture`], and the
//! result is marked [`Provenance::Conjectural`]. Recursive families are
//! evaluated by literally expanding their recursions down to the stated
//! base cases — the recursion is the source of truth — with closed forms
//! reserved for cross-checks in tests.
//!
//! Also here: the vanishing window for cycle products with `k` not a
//! multiple of 3 (where only the two possibly-nonzero degrees are
//! known), and the gluing calculus for unions whose pieces and
//! intersections are wedges of spheres on a descending dimension
//! ladder.

use crate::error::Error;
use crate::family::{Family, FamilySpec};
use crate::homology::HomologyProfile;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A wedge of spheres: counts per dimension, or contractible (the
/// wedge of no spheres). `contractible` and an empty count map are
/// kept in lockstep by the constructors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeProfile {
    pub sphere_counts: BTreeMap<i32, u64>,
    pub contractible: bool,
}

impl WedgeProfile {
    pub fn point() -> Self {
        WedgeProfile {
            sphere_counts: BTreeMap::new(),
            contractible: true,
        }
    }

    /// `count` spheres of dimension `dim` (zero spheres = a point).
    pub fn spheres(dim: i32, count: u64) -> Self {
        let mut p = WedgeProfile::point();
        p.add(dim, count);
        p
    }

    fn add(&mut self, dim: i32, count: u64) {
        if count > 0 {
            *self.sphere_counts.entry(dim).or_insert(0) += count;
            self.contractible = false;
        }
    }

    pub fn count(&self, dim: i32) -> u64 {
        self.sphere_counts.get(&dim).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.sphere_counts.values().sum()
    }

    /// Shift every sphere up by `s` dimensions.
    pub fn suspend(&self, s: u32) -> WedgeProfile {
        let mut out = WedgeProfile::point();
        for (&d, &c) in &self.sphere_counts {
            out.add(d + s as i32, c);
        }
        out
    }

    /// One-point union: counts add.
    pub fn wedge_sum(parts: &[&WedgeProfile]) -> WedgeProfile {
        let mut out = WedgeProfile::point();
        for p in parts {
            for (&d, &c) in &p.sphere_counts {
                out.add(d, c);
            }
        }
        out
    }

    /// The dimension all spheres live in, if there is exactly one.
    pub fn single_dimension(&self) -> Option<i32> {
        if self.sphere_counts.len() == 1 {
            self.sphere_counts.keys().next().copied()
        } else {
            None
        }
    }

    /// The torsion-free homology profile this wedge realizes.
    pub fn to_homology(&self) -> HomologyProfile {
        HomologyProfile {
            betti: self.sphere_counts.clone(),
            torsion: BTreeMap::new(),
            shift_applied: 0,
        }
    }

    /// Does a computed profile realize exactly this wedge?
    pub fn matches(&self, h: &HomologyProfile) -> bool {
        self.to_homology().same_groups(h)
    }
}

impl fmt::Display for WedgeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.contractible {
            return write!(f, "contractible");
        }
        let parts: Vec<String> = self
            .sphere_counts
            .iter()
            .map(|(d, c)| format!("{c} S^{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Whether a prediction is a proved statement or an extrapolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Proven,
    Conjectural,
}

/// A prediction with its audit trail: which rule fired, on what
/// authority, and any caveats worth carrying into reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prediction {
    pub profile: WedgeProfile,
    pub rule: String,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PredictOptions {
    /// Permit conjectural formulas and out-of-proven-range
    /// extrapolations (marked `Conjectural` in the result).
    pub allow_conjecture: bool,
}

/// The two degrees where a cycle product `C_k × K_n` (k not divisible
/// by 3, k ≥ 7) may have nonzero homology; everything else vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingWindow {
    pub allowed_dims: [i32; 2],
}

impl VanishingWindow {
    pub fn contains(&self, q: i32) -> bool {
        self.allowed_dims.contains(&q)
    }
}

fn too_big(what: &str) -> Error {
    Error::Range(format!("{what} exceeds 64 bits; parameters too large"))
}

fn to_u64(v: u128, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| too_big(what))
}

/// The sphere-count sequence `h`: closed form
/// `h(r,n) = ((n−1)^{r+2} − (−1)^r) / n`, cross-checked on every call
/// against its defining recursion
/// `h(0)=n−2`, `h(1)=(n−1)+(n−2)²`, `h(r)=(n−1)h(r−2)+(n−2)h(r−1)`.
pub fn h_value(r: u32, n: u32) -> Result<u64> {
    if n < 3 {
        return Err(Error::Parameter(format!(
            "h(r,n) needs n >= 3, got n = {n}"
        )));
    }
    let base = (n - 1) as u128;
    let pow = base.checked_pow(r + 2).ok_or_else(|| too_big("h(r,n)"))?;
    let pow = i128::try_from(pow).map_err(|_| too_big("h(r,n)"))?;
    let sign: i128 = if r.is_multiple_of(2) { 1 } else { -1 };
    let num = pow - sign;
    if num % n as i128 != 0 {
        return Err(Error::Internal(format!(
            "h({r},{n}): numerator {num} is not divisible by {n}"
        )));
    }
    let closed = u64::try_from(num / n as i128).map_err(|_| too_big("h(r,n)"))?;

    let m = n as u64;
    let mut prev: u64 = m - 2;
    let mut cur: u64 = (m - 1) + (m - 2) * (m - 2);
    let by_recursion = match r {
        0 => prev,
        1 => cur,
        _ => {
            for _ in 2..=r {
                let next = (m - 1)
                    .checked_mul(prev)
                    .and_then(|a| (m - 2).checked_mul(cur).and_then(|b| a.checked_add(b)))
                    .ok_or_else(|| too_big("h(r,n)"))?;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    if closed != by_recursion {
        return Err(Error::Internal(format!(
            "h({r},{n}): closed form {closed} disagrees with recursion {by_recursion}"
        )));
    }
    Ok(closed)
}

/// The single-cycle table: `I(C_k)` is two `S^{a−1}` when `k = 3a`,
/// one `S^{a−1}` when `k = 3a+1`, one `S^a` when `k = 3a+2`.
fn cycle_profile(k: u32) -> WedgeProfile {
    let a = (k / 3) as i32;
    match k % 3 {
        0 => WedgeProfile::spheres(a - 1, 2),
        1 => WedgeProfile::spheres(a - 1, 1),
        _ => WedgeProfile::spheres(a, 1),
    }
}

/// `I(C_k × K_2)` by residue of `k` mod 6.
fn cycle_by_k2_profile(k: u32) -> WedgeProfile {
    let a = (k / 6) as i32;
    match k % 6 {
        0 => WedgeProfile::spheres(4 * a - 1, 4),
        1 => WedgeProfile::spheres(4 * a, 1),
        2 | 4 => WedgeProfile::spheres(4 * a + 1, 1),
        3 => WedgeProfile::spheres(4 * a + 1, 2),
        _ => WedgeProfile::spheres(4 * a + 2, 1),
    }
}

/// `I(P_k × K_n)`: `(n−1)^r S^{2r−1}` at `k = 3r`, contractible at
/// `k = 3r+1`, `(n−1)^{r+1} S^{2r+1}` at `k = 3r+2`.
fn path_product_profile(k: u32, n: u32) -> Result<WedgeProfile> {
    let r = k / 3;
    let base = (n - 1) as u128;
    Ok(match k % 3 {
        0 => {
            let c = to_u64(base.pow(r), "sphere count")?;
            WedgeProfile::spheres(2 * r as i32 - 1, c)
        }
        1 => WedgeProfile::point(),
        _ => {
            let c = to_u64(base.pow(r + 1), "sphere count")?;
            WedgeProfile::spheres(2 * r as i32 + 1, c)
        }
    })
}

/// W-family recursion, expanded literally: base `k=2` is `(n−1)` copies
/// of `S¹`; then `ΣW_{k−1}` at `k=3r`, `Σ²W_{k−2}` at `k=3r+1`, and
/// `(n−1)` copies of `Σ²H_{k−3}` at `k=3r+2`.
fn w_profile(k: u32, n: u32, h_cache: &mut BTreeMap<u32, WedgeProfile>) -> Result<WedgeProfile> {
    if k == 2 {
        return Ok(WedgeProfile::spheres(1, (n - 1) as u64));
    }
    match k % 3 {
        0 => Ok(w_profile(k - 1, n, h_cache)?.suspend(1)),
        1 => Ok(w_profile(k - 2, n, h_cache)?.suspend(2)),
        _ => {
            let h = h_profile(k - 3, n, h_cache)?.suspend(2);
            let copies = vec![&h; (n - 1) as usize];
            Ok(WedgeProfile::wedge_sum(&copies))
        }
    }
}

/// H-family recursion, expanded literally from the four small bases
/// (`k = 2,3,4` give `n−2` spheres in dims 1,2,3; `k = 5` gives
/// `(n−1)+(n−2)²` spheres in dim 3); for `k ≥ 6`: `ΣH_{k−1}` at
/// `k=3r`, `Σ²H_{k−2}` at `k=3r+1`, and
/// `(⋁_{n−1} Σ⁴H_{k−6}) ∨ (⋁_{n−2} Σ²H_{k−3})` at `k=3r+2`.
fn h_profile(k: u32, n: u32, cache: &mut BTreeMap<u32, WedgeProfile>) -> Result<WedgeProfile> {
    if let Some(p) = cache.get(&k) {
        return Ok(p.clone());
    }
    let m = n as u64;
    let out = match k {
        2 => WedgeProfile::spheres(1, m - 2),
        3 => WedgeProfile::spheres(2, m - 2),
        4 => WedgeProfile::spheres(3, m - 2),
        5 => WedgeProfile::spheres(3, (m - 1) + (m - 2) * (m - 2)),
        _ => match k % 3 {
            0 => h_profile(k - 1, n, cache)?.suspend(1),
            1 => h_profile(k - 2, n, cache)?.suspend(2),
            _ => {
                let far = h_profile(k - 6, n, cache)?.suspend(4);
                let near = h_profile(k - 3, n, cache)?.suspend(2);
                let mut parts: Vec<&WedgeProfile> = vec![&far; (n - 1) as usize];
                parts.extend(vec![&near; (n - 2) as usize]);
                WedgeProfile::wedge_sum(&parts)
            }
        },
    };
    cache.insert(k, out.clone());
    Ok(out)
}

/// G-family closed form: `n S²` at `k=2`; `h(r−1,n)` spheres in dim
/// `2r` at `k=3r`, in dim `2r+1` at `k=3r+1`; and
/// `h(r−1,n)+(n−1)^{r+1}` spheres in dim `2r+2` at `k=3r+2`, `r ≥ 1`.
fn g_profile(k: u32, n: u32) -> Result<WedgeProfile> {
    if k == 2 {
        return Ok(WedgeProfile::spheres(2, n as u64));
    }
    let r = k / 3;
    let h = h_value(r - 1, n)?;
    Ok(match k % 3 {
        0 => WedgeProfile::spheres(2 * r as i32, h),
        1 => WedgeProfile::spheres(2 * r as i32 + 1, h),
        _ => {
            let extra = to_u64(((n - 1) as u128).pow(r + 1), "sphere count")?;
            let total = h
                .checked_add(extra)
                .ok_or_else(|| too_big("sphere count"))?;
            WedgeProfile::spheres(2 * r as i32 + 2, total)
        }
    })
}

/// Ring-closed W variant: `(n−1)^r S^{2r+1}` at `k=3r`, contractible
/// at `k=3r+1`, `(n−1)^{r+1} S^{2r+2}` at `k=3r+2`.
fn w_ring_profile(k: u32, n: u32) -> Result<WedgeProfile> {
    let r = k / 3;
    let base = (n - 1) as u128;
    Ok(match k % 3 {
        0 => WedgeProfile::spheres(2 * r as i32 + 1, to_u64(base.pow(r), "sphere count")?),
        1 => WedgeProfile::point(),
        _ => WedgeProfile::spheres(2 * r as i32 + 2, to_u64(base.pow(r + 1), "sphere count")?),
    })
}

/// Ring-closed H variant: `S²` at `k=2`, `S³` at `k=3`, then
/// `Σ²H_{k−2}` for `k ≥ 4`.
fn h_ring_profile(k: u32, n: u32) -> Result<WedgeProfile> {
    match k {
        2 => Ok(WedgeProfile::spheres(2, 1)),
        3 => Ok(WedgeProfile::spheres(3, 1)),
        _ => Ok(h_profile(k - 2, n, &mut BTreeMap::new())?.suspend(2)),
    }
}

/// The quartic `f(l,n,m) = (l−1)(n−1)(m−1)(lnm−4)/4` counting
/// 3-spheres in complete triple products.
fn f_count(l: u32, n: u32, m: u32) -> Result<u64> {
    let (l, n, m) = (l as u128, n as u128, m as u128);
    let prod = l
        .checked_mul(n)
        .and_then(|x| x.checked_mul(m))
        .ok_or_else(|| too_big("sphere count"))?;
    if prod < 4 {
        // Only K₂×K₂×K₁-shaped degenerate inputs land here; those are
        // contractible and handled before this rule fires.
        return Ok(0);
    }
    let num = (l - 1)
        .checked_mul(n - 1)
        .and_then(|x| x.checked_mul(m - 1))
        .and_then(|x| x.checked_mul(prod - 4))
        .ok_or_else(|| too_big("sphere count"))?;
    if num % 4 != 0 {
        return Err(Error::Internal(format!(
            "f({l},{n},{m}) = {num}/4 is not an integer"
        )));
    }
    to_u64(num / 4, "sphere count")
}

fn validate_factor(fam: Family, p: &[u32]) -> Result<()> {
    let bad = |msg: String| Err(Error::Parameter(msg));
    match fam {
        Family::Complete | Family::Star if p[0] < 1 => bad(format!("{} needs n >= 1", fam.name())),
        Family::Cycle if p[0] < 3 => bad("cycle needs k >= 3".into()),
        Family::Path if p[0] < 1 => bad("path needs k >= 1".into()),
        Family::Matching if p[0] < 1 => bad("matching needs q >= 1".into()),
        Family::Q if p[0] < 2 || p[1] < 2 => bad("q needs n >= 2 and m >= 2".into()),
        Family::W | Family::H | Family::G | Family::Wring | Family::Hring
            if p[0] < 2 || p[1] < 3 =>
        {
            bad(format!("{} needs k >= 2 and n >= 3", fam.name()))
        }
        _ => Ok(()),
    }
}

/// A factor whose graph has no edges at all (the tensor product then
/// has none either, so the independence complex is a full simplex).
fn edgeless(fam: Family, p: &[u32]) -> bool {
    matches!((fam, p[0]), (Family::Complete, 1) | (Family::Path, 1))
}

fn proven(profile: WedgeProfile, rule: &str) -> Prediction {
    Prediction {
        profile,
        rule: rule.into(),
        provenance: Provenance::Proven,
        notes: Vec::new(),
    }
}

fn out_of_range(rule: &str, detail: &str, opts: &PredictOptions) -> Result<()> {
    if opts.allow_conjecture {
        Ok(())
    } else {
        Err(Error::Range(format!(
            "rule `{rule}` is only proven for {detail}; pass allow-conjecture to extrapolate"
        )))
    }
}

fn no_formula(detail: String) -> Error {
    Error::Unsupported(detail)
}

/// Predict the homotopy type of the independence complex named by a
/// family spec. Errors: `Parameter` for invalid parameters,
/// `Range` for parameters outside a rule's proven range without the
/// conjecture flag, `Unsupported` when no formula is catalogued at all.
pub fn predict(spec: &FamilySpec, opts: &PredictOptions) -> Result<Prediction> {
    for (fam, p) in &spec.factors {
        validate_factor(*fam, p)?;
    }
    if spec.factors.iter().any(|(fam, p)| edgeless(*fam, p)) {
        return Ok(proven(WedgeProfile::point(), "edgeless-factor"));
    }

    let f = &spec.factors;
    // Single families first.
    if let [(fam, p)] = f.as_slice() {
        return match fam {
            Family::Cycle => Ok(proven(cycle_profile(p[0]), "cycle-table")),
            Family::W => {
                let prof = w_profile(p[0], p[1], &mut BTreeMap::new())?;
                Ok(proven(prof, "w-family"))
            }
            Family::H => {
                let prof = h_profile(p[0], p[1], &mut BTreeMap::new())?;
                Ok(proven(prof, "h-family"))
            }
            Family::G => Ok(proven(g_profile(p[0], p[1])?, "g-family")),
            Family::Wring => Ok(proven(w_ring_profile(p[0], p[1])?, "w-ring")),
            Family::Hring => Ok(proven(h_ring_profile(p[0], p[1])?, "h-ring")),
            Family::Q => {
                let (n, m) = (p[0], p[1]);
                let mut pr = proven(WedgeProfile::spheres(2, (n + m - 3) as u64), "q-family");
                if n < 3 || m < 3 {
                    out_of_range("q-family", "n >= 3 and m >= 3", opts)?;
                    pr.provenance = Provenance::Conjectural;
                    pr.notes
                        .push("extrapolated below the proven range n,m >= 3".into());
                }
                Ok(pr)
            }
            _ => Err(no_formula(format!(
                "no catalogued formula for `{}` alone; it appears only inside products",
                fam.name()
            ))),
        };
    }

    // Two-factor products.
    if f.len() == 2 {
        let find = |fam: Family| f.iter().position(|(g, _)| *g == fam);
        if let (Some(i), true) = (
            find(Family::Complete),
            f.iter().all(|(g, _)| *g == Family::Complete),
        ) {
            let n = f[i].1[0] as u64;
            let m = f[1 - i].1[0] as u64;
            return Ok(proven(
                WedgeProfile::spheres(1, (n - 1) * (m - 1)),
                "complete-pair",
            ));
        }
        if let (Some(ci), Some(ki)) = (find(Family::Cycle), find(Family::Complete)) {
            let k = f[ci].1[0];
            let n = f[ki].1[0];
            if k == 5 {
                let mut pr = proven(WedgeProfile::spheres(2, (n - 1) as u64), "pentagon-product");
                pr.notes.push(format!(
                    "two published counts conflict here ({} vs {}); this rule returns the \
                     inductively supported n-1 — sweeps record which one the computation matches",
                    n - 1,
                    n
                ));
                return Ok(pr);
            }
            if n == 2 {
                return Ok(proven(cycle_by_k2_profile(k), "cycle-by-k2"));
            }
            let nn = n as u64;
            return match k {
                3 => Ok(proven(
                    WedgeProfile::spheres(1, 2 * (nn - 1)),
                    "cycle-product-table",
                )),
                4 => Ok(proven(
                    WedgeProfile::spheres(1, nn - 1),
                    "cycle-product-table",
                )),
                6 => Ok(proven(
                    WedgeProfile::spheres(3, (nn - 1) * (3 * nn - 2)),
                    "cycle-product-table",
                )),
                _ if k.is_multiple_of(3) => {
                    let r = k / 3;
                    let h = h_value(r - 3, n)? as u128;
                    let count = (n as u128) * ((n - 1) as u128) * h
                        + 2 * ((n - 1) as u128)
                            .checked_pow(r)
                            .ok_or_else(|| too_big("sphere count"))?;
                    Ok(proven(
                        WedgeProfile::spheres(2 * r as i32 - 1, to_u64(count, "sphere count")?),
                        "cycle-product-table",
                    ))
                }
                _ => {
                    let w = vanishing_window(k, n)?;
                    Err(no_formula(format!(
                        "no closed form is catalogued for this cycle product; only the \
                         vanishing window {{{}, {}}} is known",
                        w.allowed_dims[0], w.allowed_dims[1]
                    )))
                }
            };
        }
        if let (Some(pi), Some(ki)) = (find(Family::Path), find(Family::Complete)) {
            let prof = path_product_profile(f[pi].1[0], f[ki].1[0])?;
            return Ok(proven(prof, "path-product"));
        }
        return Err(no_formula(format!(
            "no catalogued formula for the product `{}`",
            spec.text()
        )));
    }

    // Complete triples.
    if f.len() == 3 && f.iter().all(|(g, _)| *g == Family::Complete) {
        let mut params: Vec<u32> = f.iter().map(|(_, p)| p[0]).collect();
        params.sort_unstable();
        let [a, b, c] = [params[0], params[1], params[2]];
        if a == 2 {
            let count = f_count(2, b, c)?;
            return Ok(proven(WedgeProfile::spheres(3, count), "k2-triple-product"));
        }
        out_of_range(
            "complete-triple-conjecture",
            "a factor equal to K_2 (the general triple is conjectural)",
            opts,
        )?;
        let count = f_count(a, b, c)?;
        let mut pr = proven(
            WedgeProfile::spheres(3, count),
            "complete-triple-conjecture",
        );
        pr.provenance = Provenance::Conjectural;
        pr.notes
            .push("conjectured count; no proof is catalogued for three factors >= 3".into());
        return Ok(pr);
    }

    Err(no_formula(format!(
        "no catalogued formula for `{}`",
        spec.text()
    )))
}

/// The two admissible homology degrees for `C_k × K_n` with
/// `k = 3r+1` or `3r+2`, `r ≥ 2`: `{2r−1, 2r}` and `{2r, 2r+1}`.
pub fn vanishing_window(k: u32, n: u32) -> Result<VanishingWindow> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "vanishing window needs n >= 2, got n = {n}"
        )));
    }
    let r = (k / 3) as i32;
    match k % 3 {
        0 => Err(Error::Range(format!(
            "k = {k} is a multiple of 3; those products have exact sphere counts, not windows"
        ))),
        _ if r < 2 => Err(Error::Range(format!(
            "the vanishing window is proven for k >= 7 (got k = {k})"
        ))),
        1 => Ok(VanishingWindow {
            allowed_dims: [2 * r - 1, 2 * r],
        }),
        _ => Ok(VanishingWindow {
            allowed_dims: [2 * r, 2 * r + 1],
        }),
    }
}

/// Union of complexes indexed by subsets of the piece set: profile of
/// `⋂_{i∈mask} K_i` keyed by bitmask. A missing entry means that
/// intersection is contractible.
#[derive(Clone, Debug, Default)]
pub struct UnionInput {
    pub piece_count: usize,
    pub profiles: BTreeMap<u32, WedgeProfile>,
}

impl UnionInput {
    pub fn new(piece_count: usize) -> Self {
        UnionInput {
            piece_count,
            profiles: BTreeMap::new(),
        }
    }

    /// Record the profile of the intersection of the pieces listed in
    /// `members` (0-based piece indices).
    pub fn set(&mut self, members: &[usize], profile: WedgeProfile) {
        let mut mask = 0u32;
        for &m in members {
            mask |= 1 << m;
        }
        self.profiles.insert(mask, profile);
    }
}

/// Homotopy type of the union: the wedge, over every nonempty subset
/// `S` of pieces, of the `(|S|−1)`-fold suspension of the
/// `S`-intersection's profile.
///
/// Valid when the profiles sit on a dimension ladder: every piece is a
/// wedge of spheres in dimensions at least `r`, all pairwise
/// intersections are wedges concentrated in one dimension `r₂ ≤ r−1`,
/// and deeper intersections descend by exactly one dimension per extra
/// piece. The ladder is validated from the supplied profiles and a
/// violation is a hypothesis error.
pub fn union_profile(input: &UnionInput) -> Result<WedgeProfile> {
    let s = input.piece_count;
    if s == 0 || s > 20 {
        return Err(Error::Parameter(format!(
            "piece count must be between 1 and 20, got {s}"
        )));
    }
    let full = (1u32 << s) - 1;
    for &mask in input.profiles.keys() {
        if mask == 0 || mask > full {
            return Err(Error::Parameter(format!(
                "subset mask {mask:#b} does not index a nonempty subset of {s} pieces"
            )));
        }
    }

    // Validate the dimension ladder.
    let piece_min = (0..s)
        .filter_map(|i| input.profiles.get(&(1 << i)))
        .flat_map(|p| p.sphere_counts.keys().copied())
        .min();
    let mut pair_dim: Option<i32> = None;
    for depth in 2..=s {
        for (&mask, prof) in &input.profiles {
            if mask.count_ones() as usize != depth || prof.contractible {
                continue;
            }
            let d = prof.single_dimension().ok_or_else(|| {
                Error::Hypothesis(format!(
                    "intersection {mask:#b} mixes sphere dimensions; the gluing rule needs \
                     each deep intersection concentrated in one dimension"
                ))
            })?;
            let expected = match (depth, pair_dim) {
                (2, None) => {
                    let r = piece_min.ok_or_else(|| {
                        Error::Hypothesis(
                            "a non-contractible pairwise intersection requires \
                             non-contractible pieces above it"
                                .into(),
                        )
                    })?;
                    if d > r - 1 {
                        return Err(Error::Hypothesis(format!(
                            "pairwise intersections must live at least one dimension below \
                             the pieces (pieces start at {r}, pair at {d})"
                        )));
                    }
                    pair_dim = Some(d);
                    d
                }
                (2, Some(p)) => p,
                (_, Some(p)) => p - (depth as i32 - 2),
                (_, None) => {
                    return Err(Error::Hypothesis(format!(
                        "a {depth}-fold intersection is non-contractible while all pairwise \
                         intersections are contractible"
                    )))
                }
            };
            if d != expected {
                return Err(Error::Hypothesis(format!(
                    "{depth}-fold intersection {mask:#b} lives in dimension {d}; the ladder \
                     requires {expected}"
                )));
            }
        }
    }

    let mut total = WedgeProfile::point();
    for (&mask, prof) in &input.profiles {
        let suspended = prof.suspend(mask.count_ones() - 1);
        total = WedgeProfile::wedge_sum(&[&total, &suspended]);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn predict_text(text: &str, allow: bool) -> Result<Prediction> {
        let spec = FamilySpec::parse(text).unwrap();
        predict(
            &spec,
            &PredictOptions {
                allow_conjecture: allow,
            },
        )
    }

    fn profile_of(text: &str) -> WedgeProfile {
        predict_text(text, false).unwrap().profile
    }

    #[test]
    fn h_value_small_cases() {
        assert_eq!(h_value(0, 3).unwrap(), 1);
        assert_eq!(h_value(1, 3).unwrap(), 3);
        assert_eq!(h_value(2, 3).unwrap(), 5); // 2·1 + 1·3, and (2⁴−1)/3
        assert_eq!(h_value(0, 5).unwrap(), 3);
        assert!(h_value(2, 2).is_err());
    }

    #[test]
    fn cycle_table_rows() {
        assert_eq!(profile_of("cycle:k=3"), WedgeProfile::spheres(0, 2));
        assert_eq!(profile_of("cycle:k=4"), WedgeProfile::spheres(0, 1));
        assert_eq!(profile_of("cycle:k=5"), WedgeProfile::spheres(1, 1));
        assert_eq!(profile_of("cycle:k=12"), WedgeProfile::spheres(3, 2));
    }

    #[test]
    fn complete_pair_rule() {
        assert_eq!(
            profile_of("complete-x-complete:n=3,m=4"),
            WedgeProfile::spheres(1, 6)
        );
        assert_eq!(
            profile_of("complete-x-complete:n=2,m=2"),
            WedgeProfile::spheres(1, 1)
        );
    }

    #[test]
    fn edgeless_factor_wins() {
        for text in [
            "complete:n=1",
            "path-x-complete:k=1,n=5",
            "complete-x-complete:n=1,m=4",
        ] {
            let p = predict_text(text, false).unwrap();
            assert!(p.profile.contractible, "{text}");
            assert_eq!(p.rule, "edgeless-factor");
        }
    }

    #[test]
    fn cycle_product_table_rows() {
        assert_eq!(
            profile_of("cycle-x-complete:k=3,n=4"),
            WedgeProfile::spheres(1, 6)
        );
        assert_eq!(
            profile_of("cycle-x-complete:k=4,n=4"),
            WedgeProfile::spheres(1, 3)
        );
        assert_eq!(
            profile_of("cycle-x-complete:k=6,n=4"),
            WedgeProfile::spheres(3, 30)
        );
        // k = 9: n(n−1)h(0,n) + 2(n−1)³ at n=3 is 3·2·1 + 2·8 = 22.
        assert_eq!(
            profile_of("cycle-x-complete:k=9,n=3"),
            WedgeProfile::spheres(5, 22)
        );
    }

    #[test]
    fn pentagon_rule_keeps_its_caveat() {
        let p = predict_text("cycle-x-complete:k=5,n=3", false).unwrap();
        assert_eq!(p.profile, WedgeProfile::spheres(2, 2));
        assert_eq!(p.rule, "pentagon-product");
        assert!(!p.notes.is_empty());
    }

    #[test]
    fn k2_column_uses_the_mod_six_table() {
        let p = predict_text("cycle-x-complete:k=9,n=2", false).unwrap();
        assert_eq!(p.rule, "cycle-by-k2");
        assert_eq!(p.profile, WedgeProfile::spheres(5, 2));
        assert_eq!(
            profile_of("cycle-x-complete:k=12,n=2"),
            WedgeProfile::spheres(7, 4)
        );
    }

    #[test]
    fn k2_table_is_consistent_with_the_general_table_on_multiples_of_three() {
        for k in [3u32, 6, 9, 12, 15] {
            let by_k2 = cycle_by_k2_profile(k);
            let spec = FamilySpec::parse(&format!("cycle-x-complete:k={k},n=2")).unwrap();
            let general = predict(&spec, &PredictOptions::default()).unwrap().profile;
            assert_eq!(by_k2, general, "k={k}");
        }
    }

    #[test]
    fn off_multiple_cycle_products_have_no_formula() {
        let e = predict_text("cycle-x-complete:k=7,n=3", true).unwrap_err();
        assert!(matches!(e, Error::Unsupported(_)));
        assert!(e.to_string().contains("{3, 4}"));
    }

    #[test]
    fn path_product_rows() {
        assert_eq!(
            profile_of("path-x-complete:k=5,n=3"),
            WedgeProfile::spheres(3, 4)
        );
        assert!(profile_of("path-x-complete:k=7,n=3").contractible);
        assert_eq!(
            profile_of("path-x-complete:k=6,n=3"),
            WedgeProfile::spheres(3, 4)
        );
        // k = 2 coincides with the complete pair K₂×Kₙ.
        assert_eq!(
            profile_of("path-x-complete:k=2,n=4"),
            WedgeProfile::spheres(1, 3)
        );
    }

    #[test]
    fn w_family_small_cases() {
        assert_eq!(profile_of("w:k=2,n=3"), WedgeProfile::spheres(1, 2));
        assert_eq!(profile_of("w:k=3,n=3"), WedgeProfile::spheres(2, 2));
        // k=5 = 3·1+2: (n−1) copies of Σ²H₂ = (n−1)(n−2) spheres S³.
        assert_eq!(profile_of("w:k=5,n=3"), WedgeProfile::spheres(3, 2));
        assert_eq!(profile_of("w:k=5,n=4"), WedgeProfile::spheres(3, 6));
    }

    #[test]
    fn h_family_matches_its_closed_form() {
        // Literal recursion vs. h-value closed form, across both
        // congruence classes and a span of suspensions.
        for n in 3..=6u32 {
            for k in 2..=17u32 {
                let got = profile_of(&format!("h:k={k},n={n}"));
                let r = k / 3;
                let expected = match k % 3 {
                    0 => WedgeProfile::spheres(2 * r as i32, h_value(r - 1, n).unwrap()),
                    1 => WedgeProfile::spheres(2 * r as i32 + 1, h_value(r - 1, n).unwrap()),
                    _ => WedgeProfile::spheres(2 * r as i32 + 1, h_value(r, n).unwrap()),
                };
                assert_eq!(got, expected, "H k={k} n={n}");
            }
        }
    }

    #[test]
    fn g_family_rows() {
        assert_eq!(profile_of("g:k=2,n=3"), WedgeProfile::spheres(2, 3));
        assert_eq!(profile_of("g:k=2,n=5"), WedgeProfile::spheres(2, 5));
        // k=5 = 3·1+2: h(0,3) + (n−1)² = 1 + 4.
        assert_eq!(profile_of("g:k=5,n=3"), WedgeProfile::spheres(4, 5));
        assert_eq!(profile_of("g:k=3,n=4"), WedgeProfile::spheres(2, 2));
    }

    #[test]
    fn ring_variants() {
        assert_eq!(profile_of("w-ring:k=2,n=3"), WedgeProfile::spheres(2, 2));
        assert_eq!(profile_of("w-ring:k=3,n=3"), WedgeProfile::spheres(3, 2));
        assert!(profile_of("w-ring:k=4,n=5").contractible);
        assert_eq!(profile_of("h-ring:k=2,n=5"), WedgeProfile::spheres(2, 1));
        assert_eq!(profile_of("h-ring:k=3,n=3"), WedgeProfile::spheres(3, 1));
        assert_eq!(profile_of("h-ring:k=4,n=5"), WedgeProfile::spheres(3, 3));
        assert_eq!(profile_of("h-ring:k=5,n=4"), WedgeProfile::spheres(4, 2));
    }

    #[test]
    fn q_family_needs_three_by_three() {
        assert_eq!(profile_of("q:n=3,m=3"), WedgeProfile::spheres(2, 3));
        assert_eq!(profile_of("q:n=4,m=5"), WedgeProfile::spheres(2, 6));
        assert!(matches!(
            predict_text("q:n=2,m=4", false),
            Err(Error::Range(_))
        ));
        let p = predict_text("q:n=2,m=4", true).unwrap();
        assert_eq!(p.provenance, Provenance::Conjectural);
    }

    #[test]
    fn triple_products() {
        assert_eq!(
            profile_of("complete-x-complete-x-complete:n=2,m=4,l=4"),
            WedgeProfile::spheres(3, 63)
        );
        assert_eq!(
            profile_of("complete-x-complete-x-complete:n=4,m=2,l=3"),
            profile_of("cycle-x-complete:k=6,n=4"),
            "K₂×K₃ is the hexagon"
        );
        let err = predict_text("complete-x-complete-x-complete:n=3,m=3,l=3", false).unwrap_err();
        assert!(matches!(err, Error::Range(_)), "{err}");
        let p = predict_text("complete-x-complete-x-complete:n=3,m=3,l=3", true).unwrap();
        assert_eq!(p.profile, WedgeProfile::spheres(3, 46));
        assert_eq!(p.provenance, Provenance::Conjectural);
    }

    #[test]
    fn hexagon_consistency_across_rules() {
        for n in 3..=8u32 {
            let via_triple = profile_of(&format!("complete-x-complete-x-complete:n=2,m=3,l={n}"));
            let via_cycle = profile_of(&format!("cycle-x-complete:k=6,n={n}"));
            assert_eq!(via_triple, via_cycle, "n={n}");
        }
    }

    #[test]
    fn predictions_convert_to_torsion_free_homology() {
        for text in ["cycle-x-complete:k=9,n=3", "w:k=8,n=4", "q:n=4,m=4"] {
            let h = profile_of(text).to_homology();
            assert!(!h.has_torsion(), "{text}");
        }
    }

    #[test]
    fn window_rows() {
        assert_eq!(vanishing_window(7, 3).unwrap().allowed_dims, [3, 4]);
        assert_eq!(vanishing_window(8, 5).unwrap().allowed_dims, [4, 5]);
        assert_eq!(vanishing_window(10, 3).unwrap().allowed_dims, [5, 6]);
        assert!(matches!(vanishing_window(6, 3), Err(Error::Range(_))));
        assert!(matches!(vanishing_window(5, 3), Err(Error::Range(_))));
    }

    #[test]
    fn union_of_two_pieces_with_circle_overlap() {
        let mut input = UnionInput::new(2);
        input.set(&[0], WedgeProfile::spheres(2, 3));
        input.set(&[1], WedgeProfile::spheres(2, 4));
        input.set(&[0, 1], WedgeProfile::spheres(1, 2));
        assert_eq!(union_profile(&input).unwrap(), WedgeProfile::spheres(2, 9));
    }

    #[test]
    fn union_of_contractible_pieces_is_contractible() {
        let mut input = UnionInput::new(2);
        input.set(&[0], WedgeProfile::point());
        input.set(&[1], WedgeProfile::point());
        assert!(union_profile(&input).unwrap().contractible);
    }

    #[test]
    fn union_reproduces_the_hexagon_decomposition() {
        // Four pieces of ⋁₃S²; of the six pairwise overlaps, two are
        // one circle each, the rest (and all deeper) contractible:
        // 4·3 + 2 suspended circles = 14 two-spheres.
        let mut input = UnionInput::new(4);
        for i in 0..4 {
            input.set(&[i], WedgeProfile::spheres(2, 3));
        }
        input.set(&[0, 2], WedgeProfile::spheres(1, 1));
        input.set(&[1, 3], WedgeProfile::spheres(1, 1));
        let got = union_profile(&input).unwrap();
        assert_eq!(got, WedgeProfile::spheres(2, 14));
        assert_eq!(
            got.suspend(1),
            profile_of("cycle-x-complete:k=6,n=3"),
            "suspension closes the decomposition"
        );
    }

    #[test]
    fn union_rejects_broken_ladders() {
        // Pairwise intersection at the same dimension as the pieces.
        let mut input = UnionInput::new(2);
        input.set(&[0], WedgeProfile::spheres(2, 1));
        input.set(&[1], WedgeProfile::spheres(2, 1));
        input.set(&[0, 1], WedgeProfile::spheres(2, 1));
        assert!(matches!(union_profile(&input), Err(Error::Hypothesis(_))));

        // Triple alive while pairs are all contractible.
        let mut input = UnionInput::new(3);
        for i in 0..3 {
            input.set(&[i], WedgeProfile::spheres(2, 1));
        }
        input.set(&[0, 1, 2], WedgeProfile::spheres(0, 1));
        assert!(matches!(union_profile(&input), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn single_families_without_formulas_say_so() {
        for text in ["complete:n=4", "path:k=5", "star:n=3", "matching:q=2"] {
            assert!(
                matches!(predict_text(text, true), Err(Error::Unsupported(_))),
                "{text}"
            );
        }
    }
}
