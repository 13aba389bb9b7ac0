//! Finite rooted metric trees, point addresses, and the linear ordering on
//! tree points.
//!
//! A tree is built from parent links with numbered outgoing edges and exact
//! rational edge lengths. Every edge is directed parent -> child, and a point
//! is either a vertex or an interior edge position in `(0,1)` measured from
//! the parent; endpoint positions normalize to the vertex, so structural
//! equality is point equality.

use crate::rat::{format_rat, parse_rat, rat_serde, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Index of a vertex in the tree arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexIx(pub usize);

/// An edge, identified by its child vertex (edges run parent -> child).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIx(pub usize);

#[derive(Debug, Clone, thiserror::Error)]
pub enum TreeError {
    #[error("vertex {0:?} declared twice")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("cycle detected through vertex {0:?}")]
    CycleDetected(String),
    #[error("vertex {0:?} is not connected to the root")]
    Disconnected(String),
    #[error("gapped branch indices at vertex {0:?}: found {1:?}")]
    GappedBranchIndices(String, Vec<usize>),
    #[error("non-positive edge length on edge into {0:?}")]
    NonPositiveLength(String),
    #[error("malformed point literal {0:?}")]
    BadPointLiteral(String),
    #[error("point position {0} outside [0,1]")]
    PositionOutOfRange(String),
}

/// Wire form of a tree: root id plus one record per non-root vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeSpec {
    pub root: String,
    pub vertices: Vec<VertexSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub parent: String,
    /// Outgoing-edge number at the parent, 1-based.
    pub index: usize,
    #[serde(with = "rat_serde")]
    pub length: Rat,
}

/// A finite rooted metric tree with numbered outgoing edges.
#[derive(Debug, Clone)]
pub struct Tree {
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    root: usize,
    parent: Vec<Option<usize>>,
    branch_index: Vec<usize>,
    edge_len: Vec<Rat>,
    children: Vec<Vec<usize>>, // sorted by branch index
    level: Vec<usize>,
    depth_len: Vec<Rat>, // arc length root -> vertex
}

impl Tree {
    pub fn build(spec: &TreeSpec) -> Result<Tree, TreeError> {
        let mut names = vec![spec.root.clone()];
        let mut by_name = HashMap::new();
        by_name.insert(spec.root.clone(), 0usize);
        for v in &spec.vertices {
            if by_name.contains_key(&v.id) {
                return Err(TreeError::DuplicateVertex(v.id.clone()));
            }
            by_name.insert(v.id.clone(), names.len());
            names.push(v.id.clone());
        }
        let n = names.len();
        let mut parent = vec![None; n];
        let mut branch_index = vec![0usize; n];
        let mut edge_len = vec![Rat::zero(); n];
        for v in &spec.vertices {
            let ix = by_name[&v.id];
            let pix = *by_name
                .get(&v.parent)
                .ok_or_else(|| TreeError::UnknownVertex(v.parent.clone()))?;
            parent[ix] = Some(pix);
            branch_index[ix] = v.index;
            if !v.length.is_positive() {
                return Err(TreeError::NonPositiveLength(v.id.clone()));
            }
            edge_len[ix] = v.length.clone();
        }
        // Walk to the root from every vertex: detects cycles and disconnection.
        for start in 0..n {
            let mut seen = vec![false; n];
            let mut cur = start;
            while let Some(p) = parent[cur] {
                if seen[cur] {
                    return Err(TreeError::CycleDetected(names[start].clone()));
                }
                seen[cur] = true;
                cur = p;
            }
            if cur != 0 {
                return Err(TreeError::Disconnected(names[start].clone()));
            }
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 1..n {
            children[parent[v].unwrap()].push(v);
        }
        for (vix, ch) in children.iter_mut().enumerate() {
            ch.sort_by_key(|&c| branch_index[c]);
            let found: Vec<usize> = ch.iter().map(|&c| branch_index[c]).collect();
            if found.iter().enumerate().any(|(k, &b)| b != k + 1) {
                return Err(TreeError::GappedBranchIndices(names[vix].clone(), found));
            }
        }
        let mut level = vec![0usize; n];
        let mut depth_len = vec![Rat::zero(); n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| {
            let mut d = 0usize;
            let mut cur = v;
            while let Some(p) = parent[cur] {
                d += 1;
                cur = p;
            }
            d
        });
        for &v in &order {
            if let Some(p) = parent[v] {
                level[v] = level[p] + 1;
                depth_len[v] = &depth_len[p] + &edge_len[v];
            }
        }
        Ok(Tree {
            names,
            by_name,
            root: 0,
            parent,
            branch_index,
            edge_len,
            children,
            level,
            depth_len,
        })
    }

    pub fn to_spec(&self) -> TreeSpec {
        TreeSpec {
            root: self.names[self.root].clone(),
            vertices: (0..self.names.len())
                .filter(|&v| v != self.root)
                .map(|v| VertexSpec {
                    id: self.names[v].clone(),
                    parent: self.names[self.parent[v].unwrap()].clone(),
                    index: self.branch_index[v],
                    length: self.edge_len[v].clone(),
                })
                .collect(),
        }
    }

    pub fn root(&self) -> VertexIx {
        VertexIx(self.root)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexIx> + '_ {
        (0..self.names.len()).map(VertexIx)
    }

    /// All edges, identified by child vertex.
    pub fn edges(&self) -> impl Iterator<Item = EdgeIx> + '_ {
        (0..self.names.len()).filter(|&v| v != self.root).map(EdgeIx)
    }

    pub fn vertex_name(&self, v: VertexIx) -> &str {
        &self.names[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexIx> {
        self.by_name.get(name).copied().map(VertexIx)
    }

    pub fn parent(&self, v: VertexIx) -> Option<VertexIx> {
        self.parent[v.0].map(VertexIx)
    }

    pub fn branch_index_of(&self, v: VertexIx) -> usize {
        self.branch_index[v.0]
    }

    pub fn children(&self, v: VertexIx) -> impl Iterator<Item = VertexIx> + '_ {
        self.children[v.0].iter().copied().map(VertexIx)
    }

    pub fn outdegree(&self, v: VertexIx) -> usize {
        self.children[v.0].len()
    }

    pub fn valence(&self, v: VertexIx) -> usize {
        self.outdegree(v) + usize::from(v.0 != self.root)
    }

    pub fn is_branchpoint(&self, v: VertexIx) -> bool {
        self.valence(v) >= 3
    }

    /// B(T): all vertices of valence at least three.
    pub fn branchpoints(&self) -> Vec<VertexIx> {
        self.vertices().filter(|&v| self.is_branchpoint(v)).collect()
    }

    pub fn level_of(&self, v: VertexIx) -> usize {
        self.level[v.0]
    }

    pub fn edge_parent(&self, e: EdgeIx) -> VertexIx {
        VertexIx(self.parent[e.0].expect("edge of root"))
    }

    pub fn edge_child(&self, e: EdgeIx) -> VertexIx {
        VertexIx(e.0)
    }

    pub fn edge_len(&self, e: EdgeIx) -> &Rat {
        &self.edge_len[e.0]
    }

    pub fn edge_name(&self, e: EdgeIx) -> (String, String) {
        (
            self.names[self.parent[e.0].unwrap()].clone(),
            self.names[e.0].clone(),
        )
    }

    pub fn edge_by_names(&self, u: &str, v: &str) -> Option<EdgeIx> {
        let uix = self.vertex_by_name(u)?;
        let vix = self.vertex_by_name(v)?;
        if self.parent(vix) == Some(uix) {
            Some(EdgeIx(vix.0))
        } else {
            None
        }
    }

    /// Arc length from the root to a point.
    pub fn depth_of(&self, p: &Point) -> Rat {
        match p {
            Point::Vertex(v) => self.depth_len[v.0].clone(),
            Point::Edge { edge, t } => &self.depth_len[self.parent[edge.0].unwrap()] + t * &self.edge_len[edge.0],
        }
    }

    pub fn total_length(&self) -> Rat {
        self.edges().map(|e| self.edge_len(e).clone()).fold(Rat::zero(), |a, b| a + b)
    }

    /// Canonical point on `edge`; `t` in `[0,1]`, endpoints become vertices.
    pub fn point_on(&self, edge: EdgeIx, t: Rat) -> Point {
        if t.is_zero() {
            Point::Vertex(self.edge_parent(edge))
        } else if t.is_one() {
            Point::Vertex(self.edge_child(edge))
        } else {
            Point::Edge { edge, t }
        }
    }

    /// Chain of (edge, final position) entries from the root down to `p`.
    /// All entries have position 1 except possibly the last; root is empty.
    fn chain(&self, p: &Point) -> Vec<(EdgeIx, Rat)> {
        let (stop_vertex, tail) = match p {
            Point::Vertex(v) => (*v, None),
            Point::Edge { edge, t } => (self.edge_parent(*edge), Some((*edge, t.clone()))),
        };
        let mut ups = Vec::new();
        let mut cur = stop_vertex.0;
        while let Some(pp) = self.parent[cur] {
            ups.push((EdgeIx(cur), Rat::one()));
            cur = pp;
        }
        ups.reverse();
        if let Some(e) = tail {
            ups.push(e);
        }
        ups
    }

    /// The address of a point: outgoing-branch indices along the root path,
    /// plus the left-open edge containing the point and the position in it.
    pub fn address(&self, p: &Point) -> Address {
        let chain = self.chain(p);
        Address {
            indices: chain.iter().map(|(e, _)| self.branch_index[e.0]).collect(),
            edge: chain.last().map(|(e, _)| *e),
            pos: chain.last().map(|(_, t)| t.clone()).unwrap_or_else(Rat::one),
            is_vertex: matches!(p, Point::Vertex(_)),
        }
    }

    /// The linear ordering: root first, then lexicographic on addresses,
    /// then left-to-right within a shared left-open edge.
    pub fn order_cmp(&self, x: &Point, y: &Point) -> Ordering {
        if x == y {
            return Ordering::Equal;
        }
        let cx = self.chain(x);
        let cy = self.chain(y);
        for i in 0..cx.len().min(cy.len()) {
            let (ex, tx) = &cx[i];
            let (ey, ty) = &cy[i];
            if ex != ey {
                return self.branch_index[ex.0].cmp(&self.branch_index[ey.0]);
            }
            if tx != ty {
                return tx.cmp(ty);
            }
        }
        cx.len().cmp(&cy.len())
    }

    pub fn order_min<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Option<Point> {
        let mut best: Option<&Point> = None;
        for p in pts {
            best = Some(match best {
                None => p,
                Some(b) if self.order_cmp(p, b) == Ordering::Less => p,
                Some(b) => b,
            });
        }
        best.cloned()
    }

    pub fn order_max<'a>(&self, pts: impl IntoIterator<Item = &'a Point>) -> Option<Point> {
        let mut best: Option<&Point> = None;
        for p in pts {
            best = Some(match best {
                None => p,
                Some(b) if self.order_cmp(p, b) == Ordering::Greater => p,
                Some(b) => b,
            });
        }
        best.cloned()
    }

    /// The unique arc from `x` to `y` as ordered edge segments.
    pub fn hull(&self, x: &Point, y: &Point) -> Arc {
        if x == y {
            return Arc {
                segments: Vec::new(),
                start: x.clone(),
                end: y.clone(),
            };
        }
        let cx = self.chain(x);
        let cy = self.chain(y);
        // Longest run of identical full edges.
        let mut l = 0;
        while l < cx.len() && l < cy.len() && cx[l].0 == cy[l].0 && cx[l].1.is_one() && cy[l].1.is_one() {
            l += 1;
        }
        let mut segments = Vec::new();
        if l < cx.len() && l < cy.len() && cx[l].0 == cy[l].0 {
            // Same edge, at least one side ends here.
            let e = cx[l].0;
            let (a, b) = (&cx[l].1, &cy[l].1);
            if cx.len() == l + 1 && cy.len() == l + 1 {
                segments.push(Segment::new(e, a.clone(), b.clone()));
            } else if cx.len() == l + 1 {
                // y continues below this edge
                segments.push(Segment::new(e, a.clone(), Rat::one()));
                self.push_down(&mut segments, &cy[l + 1..]);
            } else {
                self.push_up(&mut segments, &cx[l + 1..]);
                segments.push(Segment::new(e, Rat::one(), b.clone()));
            }
        } else {
            // Climb from x to the common vertex, then descend to y.
            self.push_up(&mut segments, &cx[l..]);
            self.push_down(&mut segments, &cy[l..]);
        }
        segments.retain(|s| s.from != s.to);
        Arc {
            segments,
            start: x.clone(),
            end: y.clone(),
        }
    }

    fn push_up(&self, out: &mut Vec<Segment>, entries: &[(EdgeIx, Rat)]) {
        for (e, t) in entries.iter().rev() {
            out.push(Segment::new(*e, t.clone(), Rat::zero()));
        }
    }

    fn push_down(&self, out: &mut Vec<Segment>, entries: &[(EdgeIx, Rat)]) {
        for (e, t) in entries.iter() {
            out.push(Segment::new(*e, Rat::zero(), t.clone()));
        }
    }

    /// Exact arc-length distance between two points.
    pub fn dist(&self, x: &Point, y: &Point) -> Rat {
        self.arc_len(&self.hull(x, y))
    }

    pub fn arc_len(&self, arc: &Arc) -> Rat {
        arc.segments
            .iter()
            .map(|s| (&s.to - &s.from).abs() * &self.edge_len[s.edge.0])
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// The point at arc distance `d` from the start of `arc` (clamped to the end).
    pub fn arc_point_at(&self, arc: &Arc, d: &Rat) -> Point {
        let mut rem = d.clone();
        for s in &arc.segments {
            let sl = (&s.to - &s.from).abs() * &self.edge_len[s.edge.0];
            if rem <= sl && !sl.is_zero() {
                let frac = &rem / &self.edge_len[s.edge.0];
                let t = if s.to >= s.from { &s.from + &frac } else { &s.from - &frac };
                return self.point_on(s.edge, t);
            }
            rem -= sl;
        }
        arc.end.clone()
    }

    /// Arc distance from the start of `arc` to `p`, if `p` lies on the arc.
    pub fn arc_locate(&self, arc: &Arc, p: &Point) -> Option<Rat> {
        if arc.segments.is_empty() {
            return (p == &arc.start).then(Rat::zero);
        }
        let mut acc = Rat::zero();
        for s in &arc.segments {
            if let Some(t) = self.position_on_edge(p, s.edge) {
                let lo = s.from.clone().min(s.to.clone());
                let hi = s.from.clone().max(s.to.clone());
                if t >= lo && t <= hi {
                    return Some(acc + (&t - &s.from).abs() * &self.edge_len[s.edge.0]);
                }
            }
            acc += (&s.to - &s.from).abs() * &self.edge_len[s.edge.0];
        }
        None
    }

    /// Position of `p` on `e` in `[0,1]`, if `p` lies on that closed edge.
    pub fn position_on_edge(&self, p: &Point, e: EdgeIx) -> Option<Rat> {
        match p {
            Point::Edge { edge, t } if *edge == e => Some(t.clone()),
            Point::Vertex(v) if *v == self.edge_parent(e) => Some(Rat::zero()),
            Point::Vertex(v) if *v == self.edge_child(e) => Some(Rat::one()),
            _ => None,
        }
    }

    /// True if `mid` lies in the (closed) hull of `a` and `b`.
    pub fn between(&self, a: &Point, mid: &Point, b: &Point) -> bool {
        let arc = self.hull(a, b);
        self.arc_locate(&arc, mid).is_some()
    }

    /// Parses `"vertex"` or `"u-v:p/q"` into a canonical point.
    pub fn parse_point(&self, s: &str) -> Result<Point, TreeError> {
        let s = s.trim();
        if let Some(v) = self.vertex_by_name(s) {
            return Ok(Point::Vertex(v));
        }
        let (edge_part, t_part) = s
            .split_once(':')
            .ok_or_else(|| TreeError::BadPointLiteral(s.to_string()))?;
        let (u, v) = edge_part
            .split_once('-')
            .ok_or_else(|| TreeError::BadPointLiteral(s.to_string()))?;
        let e = self
            .edge_by_names(u.trim(), v.trim())
            .ok_or_else(|| TreeError::BadPointLiteral(s.to_string()))?;
        let t = parse_rat(t_part).map_err(|_| TreeError::BadPointLiteral(s.to_string()))?;
        if t < Rat::zero() || t > Rat::one() {
            return Err(TreeError::PositionOutOfRange(format_rat(&t)));
        }
        Ok(self.point_on(e, t))
    }

    pub fn format_point(&self, p: &Point) -> String {
        match p {
            Point::Vertex(v) => self.names[v.0].clone(),
            Point::Edge { edge, t } => {
                let (u, v) = self.edge_name(*edge);
                format!("{}-{}:{}", u, v, format_rat(t))
            }
        }
    }
}

/// An exact location on a tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Vertex(VertexIx),
    /// Interior edge position, in `(0,1)` measured from the parent endpoint.
    Edge { edge: EdgeIx, t: Rat },
}

impl Point {
    pub fn is_vertex(&self) -> bool {
        matches!(self, Point::Vertex(_))
    }
}

/// Wire form of a point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Vertex { vertex: String },
    Edge { edge: (String, String), t: String },
}

impl PointSpec {
    pub fn to_point(&self, tree: &Tree) -> Result<Point, TreeError> {
        match self {
            PointSpec::Vertex { vertex } => tree
                .vertex_by_name(vertex)
                .map(Point::Vertex)
                .ok_or_else(|| TreeError::UnknownVertex(vertex.clone())),
            PointSpec::Edge { edge, t } => {
                let e = tree
                    .edge_by_names(&edge.0, &edge.1)
                    .ok_or_else(|| TreeError::UnknownVertex(format!("{}-{}", edge.0, edge.1)))?;
                let t = parse_rat(t).map_err(|_| TreeError::BadPointLiteral(t.clone()))?;
                if t < Rat::zero() || t > Rat::one() {
                    return Err(TreeError::PositionOutOfRange(format_rat(&t)));
                }
                Ok(tree.point_on(e, t))
            }
        }
    }

    pub fn from_point(tree: &Tree, p: &Point) -> PointSpec {
        match p {
            Point::Vertex(v) => PointSpec::Vertex {
                vertex: tree.vertex_name(*v).to_string(),
            },
            Point::Edge { edge, t } => {
                let (u, v) = tree.edge_name(*edge);
                PointSpec::Edge {
                    edge: (u, v),
                    t: format_rat(t),
                }
            }
        }
    }
}

/// The address of a point: branch indices along the root path, the left-open
/// edge the point lies in, and the position within it (vertices sit at 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Address {
    pub indices: Vec<usize>,
    pub edge: Option<EdgeIx>,
    pub pos: Rat,
    pub is_vertex: bool,
}

impl Address {
    pub fn is_root(&self) -> bool {
        self.edge.is_none()
    }
}

/// One directed traversal of part of an edge; `from`/`to` are edge positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub edge: EdgeIx,
    pub from: Rat,
    pub to: Rat,
}

impl Segment {
    pub fn new(edge: EdgeIx, from: Rat, to: Rat) -> Self {
        Segment { edge, from, to }
    }
}

/// The unique arc between two points, as ordered segments.
/// `hull(x, x)` is degenerate: no segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub segments: Vec<Segment>,
    pub start: Point,
    pub end: Point,
}

impl Arc {
    pub fn is_degenerate(&self) -> bool {
        self.segments.is_empty()
    }
}

impl fmt::Display for VertexIx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v#{}", self.0)
    }
}

pub fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    pub fn interval_tree() -> Tree {
        Tree::build(&TreeSpec {
            root: "v0".into(),
            vertices: vec![VertexSpec {
                id: "v1".into(),
                parent: "v0".into(),
                index: 1,
                length: rat_int(1),
            }],
        })
        .unwrap()
    }

    pub fn y_tree() -> Tree {
        Tree::build(&TreeSpec {
            root: "v0".into(),
            vertices: vec![
                VertexSpec { id: "b".into(), parent: "v0".into(), index: 1, length: rat_int(1) },
                VertexSpec { id: "u1".into(), parent: "b".into(), index: 1, length: rat_int(1) },
                VertexSpec { id: "u2".into(), parent: "b".into(), index: 2, length: rat_int(1) },
            ],
        })
        .unwrap()
    }

    #[test]
    fn single_edge_has_no_branchpoints() {
        let t = interval_tree();
        assert!(t.branchpoints().is_empty());
        assert_eq!(t.vertex_count(), 2);
    }

    #[test]
    fn y_tree_branchpoint() {
        let t = y_tree();
        let b = t.vertex_by_name("b").unwrap();
        assert_eq!(t.branchpoints(), vec![b]);
        assert_eq!(t.outdegree(b), 2);
        assert_eq!(t.level_of(t.vertex_by_name("u2").unwrap()), 2);
    }

    #[test]
    fn gapped_indices_rejected() {
        let r = Tree::build(&TreeSpec {
            root: "v0".into(),
            vertices: vec![
                VertexSpec { id: "b".into(), parent: "v0".into(), index: 1, length: rat_int(1) },
                VertexSpec { id: "u1".into(), parent: "b".into(), index: 1, length: rat_int(1) },
                VertexSpec { id: "u2".into(), parent: "b".into(), index: 3, length: rat_int(1) },
            ],
        });
        assert!(matches!(r, Err(TreeError::GappedBranchIndices(_, _))));
    }

    #[test]
    fn nonpositive_length_rejected() {
        let r = Tree::build(&TreeSpec {
            root: "v0".into(),
            vertices: vec![VertexSpec {
                id: "v1".into(),
                parent: "v0".into(),
                index: 1,
                length: rat_int(0),
            }],
        });
        assert!(matches!(r, Err(TreeError::NonPositiveLength(_))));
    }

    #[test]
    fn addresses_on_y_tree() {
        let t = y_tree();
        let e_b = t.edge_by_names("v0", "b").unwrap();
        let e_u2 = t.edge_by_names("b", "u2").unwrap();
        let x = t.point_on(e_b, rat(1, 2));
        let a = t.address(&x);
        assert_eq!(a.indices, vec![1]);
        assert_eq!(a.edge, Some(e_b));
        assert!(!a.is_vertex);

        let y = t.point_on(e_u2, rat(1, 3));
        assert_eq!(t.address(&y).indices, vec![1, 2]);

        let b = Point::Vertex(t.vertex_by_name("b").unwrap());
        let ab = t.address(&b);
        assert_eq!(ab.indices, vec![1]);
        assert!(ab.is_vertex);
        assert_eq!(ab.pos, rat_int(1));

        let root = Point::Vertex(t.root());
        assert!(t.address(&root).is_root());
    }

    #[test]
    fn order_on_y_tree() {
        let t = y_tree();
        let root = Point::Vertex(t.root());
        let b = Point::Vertex(t.vertex_by_name("b").unwrap());
        let e_u1 = t.edge_by_names("b", "u1").unwrap();
        let e_u2 = t.edge_by_names("b", "u2").unwrap();
        let x1 = t.point_on(e_u1, rat(1, 2));
        let x2 = t.point_on(e_u2, rat(1, 2));
        // root before everything
        assert_eq!(t.order_cmp(&root, &x1), Ordering::Less);
        assert_eq!(t.order_cmp(&root, &b), Ordering::Less);
        // branch 1 before branch 2
        assert_eq!(t.order_cmp(&x1, &x2), Ordering::Less);
        // prefix rule: b before points past it
        assert_eq!(t.order_cmp(&b, &x1), Ordering::Less);
        assert_eq!(t.order_cmp(&x2, &x2), Ordering::Equal);
        // within an edge: left to right
        let lo = t.point_on(e_u1, rat(1, 4));
        assert_eq!(t.order_cmp(&lo, &x1), Ordering::Less);
    }

    #[test]
    fn hull_cases() {
        let t = y_tree();
        let e_b = t.edge_by_names("v0", "b").unwrap();
        let e_u1 = t.edge_by_names("b", "u1").unwrap();
        let e_u2 = t.edge_by_names("b", "u2").unwrap();
        let u1 = Point::Vertex(t.vertex_by_name("u1").unwrap());
        let u2 = Point::Vertex(t.vertex_by_name("u2").unwrap());
        let arc = t.hull(&u1, &u2);
        assert_eq!(arc.segments.len(), 2);
        assert_eq!(arc.segments[0].edge, e_u1);
        assert_eq!(arc.segments[1].edge, e_u2);
        assert_eq!(t.arc_len(&arc), rat_int(2));

        let x = t.point_on(e_b, rat(1, 4));
        let same = t.hull(&x, &t.point_on(e_b, rat(3, 4)));
        assert_eq!(same.segments.len(), 1);
        assert_eq!(t.arc_len(&same), rat(1, 2));

        let deg = t.hull(&x, &x);
        assert!(deg.is_degenerate());

        // through-branchpoint arc hit by locate
        let mid = Point::Vertex(t.vertex_by_name("b").unwrap());
        assert_eq!(t.arc_locate(&arc, &mid), Some(rat_int(1)));
        assert_eq!(t.arc_locate(&arc, &t.point_on(e_u2, rat(1, 2))), Some(rat(3, 2)));
        assert_eq!(t.arc_locate(&arc, &x), None);
    }

    #[test]
    fn arc_point_at_walks_segments() {
        let t = y_tree();
        let u1 = Point::Vertex(t.vertex_by_name("u1").unwrap());
        let u2 = Point::Vertex(t.vertex_by_name("u2").unwrap());
        let arc = t.hull(&u1, &u2);
        let e_u2 = t.edge_by_names("b", "u2").unwrap();
        assert_eq!(t.arc_point_at(&arc, &rat(3, 2)), t.point_on(e_u2, rat(1, 2)));
        assert_eq!(t.arc_point_at(&arc, &rat_int(2)), u2);
        assert_eq!(t.arc_point_at(&arc, &rat_int(0)), u1);
    }

    #[test]
    fn distances() {
        let t = y_tree();
        let e_u1 = t.edge_by_names("b", "u1").unwrap();
        let e_u2 = t.edge_by_names("b", "u2").unwrap();
        let x = t.point_on(e_u1, rat(1, 2));
        let y = t.point_on(e_u2, rat(1, 2));
        assert_eq!(t.dist(&x, &y), rat_int(1));
        assert_eq!(t.dist(&x, &x), rat_int(0));
        let root = Point::Vertex(t.root());
        assert_eq!(t.dist(&root, &y), rat(3, 2));
    }

    #[test]
    fn point_literals_roundtrip() {
        let t = y_tree();
        let p = t.parse_point("b-u2:1/3").unwrap();
        assert_eq!(t.format_point(&p), "b-u2:1/3");
        assert_eq!(t.parse_point("b").unwrap(), Point::Vertex(t.vertex_by_name("b").unwrap()));
        // endpoint positions normalize to vertices
        assert_eq!(t.parse_point("v0-b:1/1").unwrap(), Point::Vertex(t.vertex_by_name("b").unwrap()));
        assert_eq!(t.parse_point("v0-b:0/1").unwrap(), Point::Vertex(t.root()));
        assert!(t.parse_point("v0-b:3/2").is_err());
        assert!(t.parse_point("u1-u2:1/2").is_err());
    }
}
