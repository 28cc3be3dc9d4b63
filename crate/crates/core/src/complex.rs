//! Explicit simplicial complexes: face enumeration, f-vectors, and
//! integer boundary matrices.
//!
//! Faces are stored by dimension as flattened sorted index tuples, in
//! lexicographic order, so a face's row index in a boundary matrix is a
//! binary search away. The independence complex of a graph is enumerated
//! by depth-first lexicographic extension over non-neighbor candidate
//! sets, which visits each face exactly once and in order.

use crate::bitset::VertexSet;
use crate::error::{Error, Resource};
use crate::graph::Graph;
use crate::matrix::SparseIntMatrix;
use crate::Result;
use num_bigint::BigInt;
use std::time::Instant;

/// Resource guards for face enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    /// Total faces across all dimensions.
    pub max_faces: u64,
    /// Approximate bytes of face storage.
    pub max_bytes: u64,
    /// Wall-clock cutoff.
    pub deadline: Option<Instant>,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_faces: 50_000_000,
            max_bytes: 8 << 30,
            deadline: None,
        }
    }
}

/// Faces of one dimension: `width = q + 1` vertex indices per face,
/// flattened, lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FaceList {
    width: usize,
    flat: Vec<u32>,
}

impl FaceList {
    fn new(width: usize) -> Self {
        FaceList {
            width,
            flat: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.flat.len() / self.width
    }

    fn face(&self, i: usize) -> &[u32] {
        &self.flat[i * self.width..(i + 1) * self.width]
    }

    fn push(&mut self, face: &[u32]) {
        debug_assert_eq!(face.len(), self.width);
        self.flat.extend_from_slice(face);
    }

    /// Binary search by lexicographic order.
    fn index_of(&self, face: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.face(mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// f-vector: `counts[q]` = number of `q`-dimensional faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector {
    pub counts: Vec<u64>,
}

/// A finite simplicial complex with explicitly stored faces.
///
/// The complex with no faces at all (the empty space) is representable
/// and behaves correctly through homology: its reduced homology is one
/// copy of the integers in degree −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    dims: Vec<FaceList>,
}

impl Complex {
    /// The empty complex.
    pub fn empty() -> Self {
        Complex { dims: Vec::new() }
    }

    /// Append one face. Callers must supply faces in lexicographic
    /// order within each dimension and keep the result downward closed;
    /// ascending depth-first enumerations do both for free.
    pub(crate) fn push_face_in_order(&mut self, face: &[u32]) {
        let q = face.len() - 1;
        while self.dims.len() <= q {
            let w = self.dims.len() + 1;
            self.dims.push(FaceList::new(w));
        }
        debug_assert!(
            self.dims[q].flat.is_empty() || self.dims[q].face(self.dims[q].len() - 1) < face
        );
        self.dims[q].push(face);
    }

    /// Build from an arbitrary family of faces (vertex index tuples, any
    /// order): the downward closure is generated, duplicates collapse.
    pub fn from_maximal_faces(faces: &[Vec<u32>]) -> Complex {
        use std::collections::BTreeSet;
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = Vec::new();
        for f in faces {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                stack.push(s);
            }
        }
        while let Some(f) = stack.pop() {
            let q = f.len() - 1;
            if by_dim.len() <= q {
                by_dim.resize_with(q + 1, BTreeSet::new);
            }
            if !by_dim[q].insert(f.clone()) {
                continue;
            }
            if q > 0 {
                for i in 0..f.len() {
                    let mut sub = f.clone();
                    sub.remove(i);
                    stack.push(sub);
                }
            }
        }
        let dims = by_dim
            .into_iter()
            .enumerate()
            .map(|(q, set)| {
                let mut fl = FaceList::new(q + 1);
                for f in set {
                    fl.push(&f);
                }
                fl
            })
            .collect();
        Complex { dims }
    }

    /// Number of `q`-faces.
    pub fn face_count(&self, q: usize) -> usize {
        self.dims.get(q).map_or(0, |d| d.len())
    }

    /// Dimension of the complex, `None` when it has no faces.
    pub fn dim(&self) -> Option<usize> {
        if self.dims.is_empty() {
            None
        } else {
            Some(self.dims.len() - 1)
        }
    }

    /// Number of vertices (0-faces).
    pub fn vertex_count(&self) -> usize {
        self.face_count(0)
    }

    pub fn total_faces(&self) -> u64 {
        self.dims.iter().map(|d| d.len() as u64).sum()
    }

    /// Iterate the `q`-faces in lexicographic order.
    pub fn faces(&self, q: usize) -> impl Iterator<Item = &[u32]> + '_ {
        self.dims
            .get(q)
            .into_iter()
            .flat_map(|d| d.flat.chunks_exact(d.width))
    }

    pub fn f_vector(&self) -> FVector {
        FVector {
            counts: self.dims.iter().map(|d| d.len() as u64).collect(),
        }
    }

    /// Euler characteristic `Σ (−1)^q f_q` (unreduced; 0 for the empty
    /// complex).
    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(q, d)| {
                let c = d.len() as i64;
                if q % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    pub(crate) fn face_index(&self, q: usize, face: &[u32]) -> Option<usize> {
        self.dims.get(q).and_then(|d| d.index_of(face))
    }

    /// Check structural invariants: sorted distinct tuples per face,
    /// lexicographic order within a dimension, downward closure. Linear
    /// pass plus a binary search per sub-face; intended for tests.
    pub fn validate(&self) -> Result<()> {
        for (q, d) in self.dims.iter().enumerate() {
            let mut prev: Option<&[u32]> = None;
            for i in 0..d.len() {
                let f = d.face(i);
                if f.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Internal(format!(
                        "face {f:?} is not strictly sorted"
                    )));
                }
                if let Some(p) = prev {
                    if p >= f {
                        return Err(Error::Internal(format!(
                            "faces out of order at dimension {q}"
                        )));
                    }
                }
                prev = Some(f);
                if q > 0 {
                    for j in 0..f.len() {
                        let mut sub = f.to_vec();
                        sub.remove(j);
                        if self.face_index(q - 1, &sub).is_none() {
                            return Err(Error::Internal(format!(
                                "face {f:?} lacks sub-face {sub:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Independence complex of `g`: faces are the independent vertex sets.
/// `max_dim` caps the enumerated dimension (faces of size `max_dim + 1`);
/// default resource limits apply.
pub fn independence_complex(g: &Graph, max_dim: Option<usize>) -> Result<Complex> {
    independence_complex_with(g, max_dim, &EnumLimits::default())
}

/// As [`independence_complex`] with explicit resource limits.
pub fn independence_complex_with(
    g: &Graph,
    max_dim: Option<usize>,
    limits: &EnumLimits,
) -> Result<Complex> {
    let n = g.vertex_count();
    let cap = max_dim.map(|d| d + 1).unwrap_or(usize::MAX);
    let mut dims: Vec<FaceList> = Vec::new();
    let mut total: u64 = 0;
    let mut bytes: u64 = 0;
    let mut tick: u32 = 0;

    // Non-neighbor masks restricted to higher indices.
    let mut forward_nonadj: Vec<VertexSet> = Vec::with_capacity(n);
    for v in 0..n {
        let mut s = g.non_neighbors(v);
        for u in 0..=v {
            s.remove(u);
        }
        forward_nonadj.push(s);
    }

    struct Dfs<'a> {
        g: &'a Graph,
        forward: &'a [VertexSet],
        dims: &'a mut Vec<FaceList>,
        total: &'a mut u64,
        bytes: &'a mut u64,
        tick: &'a mut u32,
        cap: usize,
        limits: &'a EnumLimits,
    }

    impl Dfs<'_> {
        fn emit(&mut self, face: &[u32]) -> Result<()> {
            let q = face.len() - 1;
            if self.dims.len() <= q {
                self.dims.push(FaceList::new(q + 1));
            }
            self.dims[q].push(face);
            *self.total += 1;
            *self.bytes += 4 * face.len() as u64;
            if *self.total > self.limits.max_faces {
                return Err(Error::resource(
                    Resource::Faces,
                    format!(
                        "{} faces enumerated (limit {})",
                        *self.total, self.limits.max_faces
                    ),
                ));
            }
            if *self.bytes > self.limits.max_bytes {
                return Err(Error::resource(
                    Resource::Bytes,
                    format!(
                        "~{} bytes of faces (limit {})",
                        *self.bytes, self.limits.max_bytes
                    ),
                ));
            }
            *self.tick += 1;
            if *self.tick & 0xfff == 0 {
                if let Some(d) = self.limits.deadline {
                    if Instant::now() > d {
                        return Err(Error::resource(
                            Resource::Time,
                            format!("deadline exceeded after {} faces", *self.total),
                        ));
                    }
                }
            }
            Ok(())
        }

        fn extend(&mut self, face: &mut Vec<u32>, cand: &VertexSet) -> Result<()> {
            if face.len() >= self.cap {
                return Ok(());
            }
            for v in cand.iter() {
                face.push(v as u32);
                self.emit(face)?;
                let mut next = cand.clone();
                next.intersect_with(&self.forward[v]);
                self.extend(face, &next)?;
                face.pop();
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        g,
        forward: &forward_nonadj,
        dims: &mut dims,
        total: &mut total,
        bytes: &mut bytes,
        tick: &mut tick,
        cap,
        limits,
    };
    let _ = dfs.g;
    let mut face = Vec::new();
    let all: VertexSet = (0..n).collect();
    dfs.extend(&mut face, &all)?;
    Ok(Complex { dims })
}

/// Boundary matrix `∂_q` of the complex: rows indexed by the sorted
/// `(q−1)`-faces, columns by the sorted `q`-faces; dropping the `i`-th
/// vertex of a face contributes `(−1)^i`. Requires `1 ≤ q ≤ dim`.
pub fn boundary_matrix(x: &Complex, q: usize) -> Result<SparseIntMatrix> {
    let dim = x.dim().map(|d| d as i64).unwrap_or(-1);
    if q < 1 || (q as i64) > dim {
        return Err(Error::Parameter(format!(
            "boundary degree {q} outside 1..={dim}"
        )));
    }
    let rows = x.face_count(q - 1);
    let cols = x.face_count(q);
    let mut m = SparseIntMatrix::new(rows, cols);
    let mut sub = vec![0u32; q];
    for (c, face) in x.faces(q).enumerate() {
        for i in 0..=q {
            sub.clear();
            sub.extend_from_slice(&face[..i]);
            sub.extend_from_slice(&face[i + 1..]);
            let r = x
                .face_index(q - 1, &sub)
                .ok_or_else(|| Error::Internal(format!("missing sub-face of {face:?}")))?;
            let sign = if i % 2 == 0 { 1 } else { -1 };
            m.set(r, c, BigInt::from(sign));
        }
    }
    Ok(m)
}
