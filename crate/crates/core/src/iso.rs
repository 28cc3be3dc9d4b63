//! Graph isomorphism by canonical labeling.
//!
//! Individualization–refinement with full backtracking: color classes
//! are refined by neighbor-color multisets until stable; non-singleton
//! cells are split by individualizing each member in turn; the canonical
//! form is the lexicographically least relabeled edge list over all
//! discrete leaves. No automorphism pruning — adequate for the desk
//! scales this crate targets, quadratic-exponential in the worst case.

use crate::graph::Graph;

/// Canonical form: vertex count plus the relabeled, sorted edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub vertex_count: usize,
    pub edges: Vec<(u32, u32)>,
}

/// Refine `colors` until equitable: two vertices share a color iff they
/// currently share a color and have equal multisets of neighbor colors.
/// Color ids are reassigned densely, ordered by (old color, signature),
/// so the refinement is label-invariant.
fn refine(g: &Graph, colors: &mut Vec<u32>) {
    let n = g.vertex_count();
    if n == 0 {
        return;
    }
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u32> = g.neighbors(v).map(|u| colors[u]).collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut next = vec![0u32; n];
        let mut c = 0u32;
        next[order[0]] = 0;
        for w in order.windows(2) {
            if sigs[w[0]] != sigs[w[1]] {
                c += 1;
            }
            next[w[1]] = c;
        }
        if next == *colors {
            return;
        }
        *colors = next;
    }
}

fn is_discrete(colors: &[u32]) -> bool {
    let n = colors.len();
    let mut seen = vec![false; n];
    for &c in colors {
        if seen[c as usize] {
            return false;
        }
        seen[c as usize] = true;
    }
    true
}

/// Edge list under the labeling that sends each vertex to its color.
fn edge_list_under(g: &Graph, colors: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (colors[u], colors[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

fn search(g: &Graph, colors: Vec<u32>, best: &mut Option<Vec<(u32, u32)>>) {
    if is_discrete(&colors) {
        let edges = edge_list_under(g, &colors);
        match best {
            Some(b) if *b <= edges => {}
            _ => *best = Some(edges),
        }
        return;
    }
    // First smallest non-singleton cell, by color id.
    let n = colors.len();
    let mut size = vec![0usize; n];
    for &c in &colors {
        size[c as usize] += 1;
    }
    let target = (0..n)
        .filter(|&c| size[c] > 1)
        .min_by_key(|&c| (size[c], c))
        .expect("non-discrete coloring has a non-singleton cell");
    for v in 0..n {
        if colors[v] as usize != target {
            continue;
        }
        // Individualize v: give it a color just below its cell, shift
        // everything at or above the cell up by one.
        let mut next: Vec<u32> = colors
            .iter()
            .map(|&c| if c as usize >= target { c + 1 } else { c })
            .collect();
        next[v] = target as u32;
        refine(g, &mut next);
        search(g, next, best);
    }
}

/// Canonical form of `g`: invariant under relabeling, equal for two
/// graphs exactly when they are isomorphic.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.vertex_count();
    let mut colors = vec![0u32; n];
    refine(g, &mut colors);
    let mut best = None;
    search(g, colors, &mut best);
    CanonicalForm {
        vertex_count: n,
        edges: best.unwrap_or_default(),
    }
}

/// Isomorphism test via cheap invariants, then canonical forms.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.vertex_count()).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.vertex_count()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}
