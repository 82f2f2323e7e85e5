use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::TreeError;

/// A point of the barycentric subdivision: an original vertex or the
/// midpoint of an original edge (stored with `u < v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum TreePoint {
    Vertex(usize),
    Midpoint(usize, usize),
}

impl TreePoint {
    pub fn midpoint(u: usize, v: usize) -> Self {
        if u < v {
            TreePoint::Midpoint(u, v)
        } else {
            TreePoint::Midpoint(v, u)
        }
    }
}

impl fmt::Display for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreePoint::Vertex(v) => write!(f, "{v}"),
            TreePoint::Midpoint(u, v) => write!(f, "{u}-{v}"),
        }
    }
}

/// A finite simplicial tree on vertices `0..n`, together with its
/// barycentric subdivision.
///
/// Subdivision points have ids `0..n` for vertices and `n + e` for the
/// midpoint of edge `e` (edges sorted lexicographically). All distances are
/// measured in the subdivision, so adjacent original vertices are at
/// distance 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    sub_adj: Vec<Vec<usize>>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl Tree {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!("{n} vertices but {} edges", edges.len())));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(TreeError::NotATree(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(TreeError::NotATree(format!("self loop at {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(TreeError::NotATree("repeated edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut sub_adj = vec![Vec::new(); n + normalized.len()];
        let mut edge_index = HashMap::with_capacity(normalized.len());
        for (e, &(u, v)) in normalized.iter().enumerate() {
            let m = n + e;
            sub_adj[u].push(m);
            sub_adj[v].push(m);
            sub_adj[m].push(u);
            sub_adj[m].push(v);
            edge_index.insert((u, v), e);
        }
        let tree = Tree { n, edges: normalized, adj, sub_adj, edge_index };
        if tree.distances_from(0).contains(&u32::MAX) {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(tree)
    }

    /// Edge-list text: one `u v` pair of 0-based ids per line; blank lines
    /// and `#` comments ignored. The vertex count is one more than the
    /// largest id, and an empty list is the one-vertex tree.
    pub fn parse_edge_list(text: &str) -> Result<Self, TreeError> {
        let mut edges = Vec::new();
        let mut max_id = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ids: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| TreeError::Parse { line: lineno + 1, message: format!("{s:?} is not a vertex id") })
            };
            if ids.len() != 2 {
                return Err(TreeError::Parse { line: lineno + 1, message: "expected two vertex ids".into() });
            }
            let (u, v) = (parse(ids[0])?, parse(ids[1])?);
            max_id = max_id.max(u).max(v);
            edges.push((u, v));
        }
        let n = if edges.is_empty() { 1 } else { max_id + 1 };
        Tree::new(n, &edges)
    }

    pub fn path_graph(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Tree::new(n, &edges).expect("path is a tree")
    }

    /// Hub 0 with `leaves` leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Tree::new(leaves + 1, &edges).expect("star is a tree")
    }

    /// Hub 0 with `legs` paths of `leg_len` edges each.
    pub fn spider(legs: usize, leg_len: usize) -> Self {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..leg_len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::new(next, &edges).expect("spider is a tree")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index.contains_key(&(u.min(v), u.max(v)))
    }

    /// Number of subdivision points: vertices plus edge midpoints.
    pub fn num_points(&self) -> usize {
        self.sub_adj.len()
    }

    pub fn sub_neighbors(&self, id: usize) -> &[usize] {
        &self.sub_adj[id]
    }

    pub fn point(&self, id: usize) -> TreePoint {
        if id < self.n {
            TreePoint::Vertex(id)
        } else {
            let (u, v) = self.edges[id - self.n];
            TreePoint::Midpoint(u, v)
        }
    }

    pub fn point_id(&self, p: &TreePoint) -> Result<usize, TreeError> {
        match *p {
            TreePoint::Vertex(v) if v < self.n => Ok(v),
            TreePoint::Midpoint(u, v) => {
                self.edge_index.get(&(u.min(v), u.max(v))).map(|e| self.n + e).ok_or(TreeError::ForeignPoint(*p))
            }
            _ => Err(TreeError::ForeignPoint(*p)),
        }
    }

    /// Id of the midpoint of edge `{u, v}`, if it is an edge.
    pub fn midpoint_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).map(|e| self.n + e)
    }

    pub fn is_vertex_id(&self, id: usize) -> bool {
        id < self.n
    }

    /// Endpoints of the edge whose midpoint is `id`.
    pub fn midpoint_endpoints(&self, id: usize) -> Option<(usize, usize)> {
        id.checked_sub(self.n).and_then(|e| self.edges.get(e).copied())
    }

    /// Subdivision distances from `id` to every point (`u32::MAX` if unreachable).
    pub fn distances_from(&self, id: usize) -> Vec<u32> {
        self.multi_source_distances(std::iter::once(id))
    }

    pub fn multi_source_distances<I: IntoIterator<Item = usize>>(&self, sources: I) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.num_points()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.sub_adj[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Distance in half-edge units.
    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<u32, TreeError> {
        let a = self.point_id(p)?;
        let b = self.point_id(q)?;
        Ok(self.distances_from(a)[b])
    }

    /// Subdivision points on the unique path from `a` to `b`, inclusive.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let dist = self.distances_from(b);
        let mut out = vec![a];
        let mut x = a;
        while x != b {
            x = *self.sub_adj[x].iter().find(|&&y| dist[y] + 1 == dist[x]).expect("tree is connected");
            out.push(x);
        }
        out
    }

    /// Centre of the subdivision: midpoint of a longest path. Every
    /// automorphism of the tree fixes it.
    pub fn center(&self) -> usize {
        let far = |from: usize| {
            let d = self.distances_from(from);
            (0..d.len()).max_by_key(|&i| (d[i], std::cmp::Reverse(i))).expect("nonempty")
        };
        let a = far(0);
        let b = far(a);
        let path = self.path(a, b);
        path[path.len() / 2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_trees() {
        assert!(Tree::new(3, &[(0, 1)]).is_err());
        assert!(Tree::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Tree::new(4, &[(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(Tree::new(2, &[(0, 0)]).is_err());
        assert!(Tree::new(2, &[(0, 2)]).is_err());
        assert!(Tree::new(0, &[]).is_err());
        assert!(Tree::new(1, &[]).is_ok());
    }

    #[test]
    fn basic_distances() {
        let t = Tree::path_graph(4);
        let v = |i| TreePoint::Vertex(i);
        assert_eq!(t.distance(&v(2), &v(2)).unwrap(), 0);
        assert_eq!(t.distance(&v(0), &v(1)).unwrap(), 2);
        assert_eq!(t.distance(&v(1), &TreePoint::midpoint(1, 2)).unwrap(), 1);
        assert_eq!(t.distance(&v(0), &v(3)).unwrap(), 6);
        assert!(matches!(t.distance(&v(0), &TreePoint::midpoint(0, 2)), Err(TreeError::ForeignPoint(_))));
        assert!(t.distance(&v(9), &v(0)).is_err());
    }

    #[test]
    fn point_ids_round_trip() {
        let t = Tree::spider(3, 2);
        for id in 0..t.num_points() {
            assert_eq!(t.point_id(&t.point(id)).unwrap(), id);
        }
    }

    #[test]
    fn centers() {
        assert_eq!(Tree::path_graph(3).center(), 1);
        let t = Tree::path_graph(4);
        assert_eq!(t.point(t.center()), TreePoint::midpoint(1, 2));
        assert_eq!(Tree::star(5).center(), 0);
        assert_eq!(Tree::new(1, &[]).unwrap().center(), 0);
    }

    #[test]
    fn edge_list_format() {
        let t = Tree::parse_edge_list("# spider\n0 1\n0 2\n\n0 3  # leg\n").unwrap();
        assert_eq!(t, Tree::star(3));
        assert_eq!(Tree::parse_edge_list("").unwrap().num_vertices(), 1);
        assert!(matches!(Tree::parse_edge_list("0 1\n1 x\n"), Err(TreeError::Parse { line: 2, .. })));
        assert!(Tree::parse_edge_list("0 1 2\n").is_err());
    }
}
