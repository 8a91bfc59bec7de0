//! Quivers, dimension vectors, and Dynkin/affine classification of the
//! underlying graph.
//!
//! Classification is orientation-free: only the underlying undirected graph
//! decides the family.  Alongside the family and rank, [`classify`] returns a
//! layout (which vertices form the bottom chain, which are raised) so that
//! dimension vectors can be printed in the stacked two-row convention used
//! in the root tables: bottom chain left to right with the long arm first,
//! raised entries above their attachment vertex.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A finite directed graph with named vertices and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuiverError {
    DuplicateVertex(String),
    DuplicateArrow(String),
    UnknownEndpoint { arrow: String, vertex: String },
    Disconnected,
    NotDynkin,
    NotAffine,
    Cyclic,
}

impl fmt::Display for QuiverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverError::DuplicateVertex(v) => write!(f, "duplicate vertex id `{v}`"),
            QuiverError::DuplicateArrow(a) => write!(f, "duplicate arrow id `{a}`"),
            QuiverError::UnknownEndpoint { arrow, vertex } => {
                write!(f, "arrow `{arrow}` references unknown vertex `{vertex}`")
            }
            QuiverError::Disconnected => write!(f, "quiver is not connected"),
            QuiverError::NotDynkin => write!(f, "underlying graph is not of Dynkin type"),
            QuiverError::NotAffine => write!(f, "underlying graph is not of affine type"),
            QuiverError::Cyclic => write!(f, "quiver has an oriented cycle"),
        }
    }
}
impl core::error::Error for QuiverError {}


impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self, QuiverError> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let mut arr = Vec::new();
        for (name, from, to) in arrows {
            if arr.iter().any(|a: &Arrow| a.name == name) {
                return Err(QuiverError::DuplicateArrow(name));
            }
            let f = vertices
                .iter()
                .position(|v| *v == from)
                .ok_or_else(|| QuiverError::UnknownEndpoint { arrow: name.clone(), vertex: from.clone() })?;
            let t = vertices
                .iter()
                .position(|v| *v == to)
                .ok_or_else(|| QuiverError::UnknownEndpoint { arrow: name.clone(), vertex: to.clone() })?;
            arr.push(Arrow { name, from: f, to: t });
        }
        Ok(Quiver { vertex_names: vertices, arrows: arr })
    }

    /// Convenience constructor from 1-based vertex count and index pairs.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize)]) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| alloc::format!("{i}")).collect();
        let arr = arrows
            .iter()
            .enumerate()
            .map(|(k, &(f, t))| {
                assert!(f >= 1 && f <= n && t >= 1 && t <= n);
                Arrow { name: alloc::format!("a{}", k + 1), from: f - 1, to: t - 1 }
            })
            .collect();
        Quiver { vertex_names: vertices, arrows: arr }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.vertex_names[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|v| v == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices() == 0 {
            return false;
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.from, a.to), (a.to, a.from)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Vertices in a topological order (sources first).  Errors on oriented
    /// cycles.
    pub fn topological_order(&self) -> Result<Vec<usize>, QuiverError> {
        let n = self.n_vertices();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.to] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            order.push(v);
            for a in &self.arrows {
                if a.from == v {
                    indeg[a.to] -= 1;
                    if indeg[a.to] == 0 {
                        queue.push(a.to);
                    }
                }
            }
        }
        if order.len() != n {
            return Err(QuiverError::Cyclic);
        }
        Ok(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    pub fn undirected_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n_vertices()];
        for a in &self.arrows {
            deg[a.from] += 1;
            deg[a.to] += 1;
        }
        deg
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for a in &self.arrows {
            if a.from == v {
                out.push(a.to);
            }
            if a.to == v {
                out.push(a.from);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Integer vector indexed by the vertices of a quiver (in vertex order).
pub type DimVec = Vec<i64>;

pub fn dim_total(d: &DimVec) -> i64 {
    d.iter().sum()
}

pub fn dim_add(a: &DimVec, b: &DimVec) -> DimVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn dim_sub(a: &DimVec, b: &DimVec) -> DimVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dim_leq(a: &DimVec, b: &DimVec) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// The generic Euler form with virtual-arrow correction:
/// vertex sum minus arrow sum plus virtual-arrow sum.
///
/// `arrows` and `virtual_arrows` are (source, target) index pairs into the
/// common vertex set indexing `f` and `g`.
pub fn euler_form(
    f: &DimVec,
    g: &DimVec,
    arrows: &[(usize, usize)],
    virtual_arrows: &[(usize, usize)],
) -> i64 {
    assert_eq!(f.len(), g.len(), "dimension vector index mismatch");
    let mut total: i64 = f.iter().zip(g).map(|(x, y)| x * y).sum();
    for &(s, t) in arrows {
        total -= f[s] * g[t];
    }
    for &(s, t) in virtual_arrows {
        total += f[s] * g[t];
    }
    total
}

/// Euler form of the path algebra of `q` (no virtual arrows).
pub fn euler_form_kq(q: &Quiver, f: &DimVec, g: &DimVec) -> i64 {
    let arrows: Vec<(usize, usize)> = q.arrows().iter().map(|a| (a.from, a.to)).collect();
    euler_form(f, g, &arrows, &[])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
    AffineA,
    AffineD,
    AffineE,
    Other,
}

impl Family {
    pub fn is_dynkin(self) -> bool {
        matches!(self, Family::A | Family::D | Family::E)
    }
    pub fn is_affine(self) -> bool {
        matches!(self, Family::AffineA | Family::AffineD | Family::AffineE)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
            Family::AffineA => "affine A",
            Family::AffineD => "affine D",
            Family::AffineE => "affine E",
            Family::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// Shape of the underlying graph plus a printing layout.
///
/// `bottom` lists vertex indices left to right along the main chain (long arm
/// first); `raised` lists `(attachment position in bottom, vertex)` pairs for
/// vertices drawn above the chain.  For affine E6 the second arm vertex is
/// raised twice; it is stored after its neighbor with the same attachment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverShape {
    pub family: Family,
    pub rank: usize,
    pub bottom: Vec<usize>,
    pub raised: Vec<(usize, usize)>,
}

/// Identifies the underlying undirected graph as Dynkin A/D/E, affine
/// A~/D~/E~, or other.
pub fn classify(q: &Quiver) -> Result<QuiverShape, QuiverError> {
    if !q.is_connected() {
        return Err(QuiverError::Disconnected);
    }
    let n = q.n_vertices();
    let n_edges = q.arrows().len();
    let deg = q.undirected_degrees();
    // Multi-edges (including 2-cycles) only occur in affine A1; treat any
    // repeated pair as a cycle of length 2.
    if n_edges == n {
        // exactly one undirected cycle; affine A_{n-1} iff every degree is 2
        if deg.iter().all(|&d| d == 2) {
            let bottom = cycle_order(q);
            return Ok(QuiverShape { family: Family::AffineA, rank: n - 1, bottom, raised: vec![] });
        }
        return Ok(QuiverShape { family: Family::Other, rank: n, bottom: (0..n).collect(), raised: vec![] });
    }
    if n_edges != n - 1 {
        return Ok(QuiverShape { family: Family::Other, rank: n, bottom: (0..n).collect(), raised: vec![] });
    }
    // a tree from here on
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    match branch.len() {
        0 => {
            // path graph: Dynkin A_n
            let bottom = path_order(q);
            Ok(QuiverShape { family: Family::A, rank: n, bottom, raised: vec![] })
        }
        1 => classify_single_branch(q, branch[0]),
        2 => {
            // affine D~: two trivalent vertices, each carrying two leaves
            let (b1, b2) = (branch[0], branch[1]);
            if deg[b1] != 3 || deg[b2] != 3 {
                return Ok(other(n));
            }
            let leaves1: Vec<usize> = q.neighbors(b1).into_iter().filter(|&v| deg[v] == 1).collect();
            let leaves2: Vec<usize> = q.neighbors(b2).into_iter().filter(|&v| deg[v] == 1).collect();
            if leaves1.len() != 2 || leaves2.len() != 2 {
                return Ok(other(n));
            }
            // bottom: leaf1 - chain(b1..b2) - leaf2, raised: other leaf of each
            let mut chain = tree_path(q, b1, b2);
            let (l1a, l1b) = (leaves1[0].min(leaves1[1]), leaves1[0].max(leaves1[1]));
            let (l2a, l2b) = (leaves2[0].min(leaves2[1]), leaves2[0].max(leaves2[1]));
            let mut bottom = vec![l1a];
            bottom.append(&mut chain);
            bottom.push(l2a);
            let raised = vec![(1, l1b), (bottom.len() - 2, l2b)];
            Ok(QuiverShape { family: Family::AffineD, rank: n - 1, bottom, raised })
        }
        _ => Ok(other(n)),
    }
}

fn other(n: usize) -> QuiverShape {
    QuiverShape { family: Family::Other, rank: n, bottom: (0..n).collect(), raised: vec![] }
}

fn classify_single_branch(q: &Quiver, b: usize) -> Result<QuiverShape, QuiverError> {
    let n = q.n_vertices();
    let deg = q.undirected_degrees();
    if deg[b] == 4 {
        // star with 4 leaves: affine D4
        let leaves = q.neighbors(b);
        if n == 5 && leaves.iter().all(|&v| deg[v] == 1) {
            let mut ls = leaves.clone();
            ls.sort_unstable();
            let bottom = vec![ls[0], b, ls[1]];
            let raised = vec![(1, ls[2]), (1, ls[3])];
            return Ok(QuiverShape { family: Family::AffineD, rank: 4, bottom, raised });
        }
        return Ok(other(n));
    }
    if deg[b] != 3 {
        return Ok(other(n));
    }
    // arms from the trivalent vertex, as vertex lists walking outward
    let mut arms: Vec<Vec<usize>> = Vec::new();
    for start in q.neighbors(b) {
        let mut arm = vec![start];
        let mut prev = b;
        let mut cur = start;
        loop {
            let next: Vec<usize> = q.neighbors(cur).into_iter().filter(|&v| v != prev).collect();
            match next.len() {
                0 => break,
                1 => {
                    prev = cur;
                    cur = next[0];
                    arm.push(cur);
                }
                _ => return Ok(other(n)), // second branch vertex handled elsewhere
            }
        }
        arms.push(arm);
    }
    arms.sort_by(|a, b2| b2.len().cmp(&a.len()).then(a.first().cmp(&b2.first())));
    let lens = [arms[0].len(), arms[1].len(), arms[2].len()];
    let shape = |family, rank, arms: &[Vec<usize>], raise_idx: usize| {
        // bottom = longest arm reversed + branch + next arm; raised = arms[raise_idx..]
        let mut bottom: Vec<usize> = arms[0].iter().rev().copied().collect();
        let attach = bottom.len();
        bottom.push(b);
        bottom.extend(arms[1].iter().copied());
        let mut raised = Vec::new();
        for arm in &arms[raise_idx..] {
            for (k, &v) in arm.iter().enumerate() {
                // draw the raised arm bending left: attachment column, then one to the left
                raised.push((attach.saturating_sub(k), v));
            }
        }
        QuiverShape { family, rank, bottom, raised }
    };
    match lens {
        [x, 1, 1] => {
            // Dynkin D_n, n = x + 3
            Ok(shape(Family::D, x + 3, &arms, 2))
        }
        [2, 2, 1] => Ok(shape(Family::E, 6, &arms, 2)),
        [3, 2, 1] => Ok(shape(Family::E, 7, &arms, 2)),
        [4, 2, 1] => Ok(shape(Family::E, 8, &arms, 2)),
        [2, 2, 2] => Ok(shape(Family::AffineE, 6, &arms, 2)),
        [3, 3, 1] => Ok(shape(Family::AffineE, 7, &arms, 2)),
        [5, 2, 1] => Ok(shape(Family::AffineE, 8, &arms, 2)),
        _ => Ok(other(q.n_vertices())),
    }
}

fn path_order(q: &Quiver) -> Vec<usize> {
    let deg = q.undirected_degrees();
    if q.n_vertices() == 1 {
        return vec![0];
    }
    let ends: Vec<usize> = (0..q.n_vertices()).filter(|&v| deg[v] == 1).collect();
    let start = *ends.iter().min().unwrap();
    let end = *ends.iter().find(|&&v| v != start).unwrap();
    tree_path_inclusive(q, start, end)
}

fn cycle_order(q: &Quiver) -> Vec<usize> {
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    let mut cur = 0usize;
    while order.len() < q.n_vertices() {
        let next = q.neighbors(cur).into_iter().find(|&v| v != prev && !order.contains(&v));
        match next {
            Some(v) => {
                order.push(v);
                prev = cur;
                cur = v;
            }
            None => break,
        }
    }
    order
}

/// Vertices strictly between `from` and `to` plus both endpoints' interior
/// path, excluding the endpoints themselves.
fn tree_path(q: &Quiver, from: usize, to: usize) -> Vec<usize> {
    tree_path_inclusive(q, from, to)
}

fn tree_path_inclusive(q: &Quiver, from: usize, to: usize) -> Vec<usize> {
    // DFS in a tree
    fn dfs(q: &Quiver, cur: usize, target: usize, prev: usize, path: &mut Vec<usize>) -> bool {
        path.push(cur);
        if cur == target {
            return true;
        }
        for nb in q.neighbors(cur) {
            if nb != prev && dfs(q, nb, target, cur, path) {
                return true;
            }
        }
        path.pop();
        false
    }
    let mut path = Vec::new();
    let found = dfs(q, from, to, usize::MAX, &mut path);
    assert!(found, "tree_path endpoints not connected");
    path
}

/// Renders a dimension vector in the stacked two-row layout of `shape`.
pub fn render_stacked(shape: &QuiverShape, v: &DimVec) -> String {
    use core::fmt::Write;
    let cell = |x: i64| alloc::format!("{x}");
    let widths: Vec<usize> = shape.bottom.iter().map(|&i| cell(v[i]).len()).collect();
    let mut col_start = vec![0usize; shape.bottom.len()];
    for k in 1..shape.bottom.len() {
        col_start[k] = col_start[k - 1] + widths[k - 1] + 1;
    }
    let mut top = String::new();
    if !shape.raised.is_empty() {
        let mut cells: Vec<(usize, String)> =
            shape.raised.iter().map(|&(pos, vi)| (col_start[pos], cell(v[vi]))).collect();
        cells.sort();
        for (start, s) in cells {
            while top.len() < start {
                top.push(' ');
            }
            if !top.is_empty() && !top.ends_with(' ') {
                top.push(' ');
            }
            top.push_str(&s);
        }
    }
    let mut bottom = String::new();
    for (k, &i) in shape.bottom.iter().enumerate() {
        if k > 0 {
            bottom.push(' ');
        }
        let _ = write!(bottom, "{}", cell(v[i]));
    }
    if top.is_empty() {
        bottom
    } else {
        alloc::format!("{top}\n{bottom}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_a4_mixed_orientation() {
        // path with orientation 1->2<-3->4
        let q = Quiver::from_arrows(4, &[(1, 2), (3, 2), (3, 4)]);
        let s = classify(&q).unwrap();
        assert_eq!(s.family, Family::A);
        assert_eq!(s.rank, 4);
        assert_eq!(s.bottom.len(), 4);
    }

    #[test]
    fn classify_e6_figure_orientation() {
        // bottom chain 1..5, raised 6 attached to 3; arrows 2->1, 2->3, 4->3, 5->4, 6->3
        let q = Quiver::from_arrows(6, &[(2, 1), (2, 3), (4, 3), (5, 4), (6, 3)]);
        let s = classify(&q).unwrap();
        assert_eq!(s.family, Family::E);
        assert_eq!(s.rank, 6);
        assert_eq!(s.raised.len(), 1);
        assert_eq!(s.raised[0].1, 5); // vertex "6" (index 5) is raised
        assert_eq!(s.bottom[2], 2, "trivalent vertex in the middle of the chain");
    }

    #[test]
    fn classify_oriented_3_cycle() {
        let q = Quiver::from_arrows(3, &[(1, 2), (2, 3), (3, 1)]);
        let s = classify(&q).unwrap();
        assert_eq!(s.family, Family::AffineA);
        assert_eq!(s.rank, 2);
        assert!(!q.is_acyclic());
    }

    #[test]
    fn classify_d4_and_affine_d4() {
        let d4 = Quiver::from_arrows(4, &[(1, 2), (3, 2), (4, 2)]);
        let s = classify(&d4).unwrap();
        assert_eq!((s.family, s.rank), (Family::D, 4));
        let aff = Quiver::from_arrows(5, &[(1, 2), (3, 2), (4, 2), (5, 2)]);
        let s = classify(&aff).unwrap();
        assert_eq!((s.family, s.rank), (Family::AffineD, 4));
    }

    #[test]
    fn classify_rejects_disconnected() {
        let q = Quiver::new(
            alloc::vec!["1".into(), "2".into()],
            alloc::vec![],
        )
        .unwrap();
        assert_eq!(classify(&q), Err(QuiverError::Disconnected));
    }

    #[test]
    fn euler_form_examples() {
        // zero vectors
        assert_eq!(euler_form(&alloc::vec![0, 0], &alloc::vec![0, 0], &[(0, 1)], &[]), 0);
        // A2 extended to depth 2: 4 vertices, 4 arrows, 1 virtual arrow,
        // all-ones vectors: 4 - 4 + 1 = 1
        let f = alloc::vec![1, 1, 1, 1];
        let arrows = [(0, 2), (1, 3), (0, 1), (2, 3)];
        let virt = [(0, 3)];
        assert_eq!(euler_form(&f, &f, &arrows, &virt), 1);
    }

    #[test]
    fn stacked_rendering() {
        let q = Quiver::from_arrows(6, &[(2, 1), (2, 3), (4, 3), (5, 4), (6, 3)]);
        let s = classify(&q).unwrap();
        let v = alloc::vec![1, 2, 3, 2, 1, 2];
        assert_eq!(render_stacked(&s, &v), "    2\n1 2 3 2 1");
    }
}
