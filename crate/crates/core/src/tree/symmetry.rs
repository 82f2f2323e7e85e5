//! Automorphisms of a finite tree via canonical labels of rooted subtrees.
//!
//! Every automorphism fixes the centre of the subdivision, so rooting there
//! and labelling rooted subtrees up to isomorphism (AHU) describes the whole
//! automorphism group: it permutes isomorphic siblings, recursively.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::graph::Tree;
use super::isom::TreeIsom;

pub struct SymmetryStructure {
    root: usize,
    /// Children of each subdivision point, sorted by (label, id).
    children: Vec<Vec<usize>>,
    label: Vec<u32>,
}

impl SymmetryStructure {
    pub fn new(tree: &Tree) -> Self {
        let root = tree.center();
        let np = tree.num_points();
        let mut parent = vec![usize::MAX; np];
        let mut order = vec![root];
        parent[root] = root;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in tree.sub_neighbors(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    order.push(y);
                }
            }
        }
        let mut children = vec![Vec::new(); np];
        for &x in &order[1..] {
            children[parent[x]].push(x);
        }
        let mut label = vec![0u32; np];
        let mut intern: HashMap<Vec<u32>, u32> = HashMap::new();
        for &x in order.iter().rev() {
            let mut key: Vec<u32> = children[x].iter().map(|&c| label[c]).collect();
            key.sort_unstable();
            let next = intern.len() as u32;
            label[x] = *intern.entry(key).or_insert(next);
        }
        for c in &mut children {
            c.sort_by_key(|&y| (label[y], y));
        }
        SymmetryStructure { root, children, label }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Order of the automorphism group: the product, over all points, of
    /// `c!` for each class of `c` isomorphic children. Saturates.
    pub fn group_order(&self) -> u128 {
        let mut order: u128 = 1;
        for ch in &self.children {
            let mut start = 0;
            while start < ch.len() {
                let l = self.label[ch[start]];
                let c = ch[start..].iter().take_while(|&&y| self.label[y] == l).count();
                for f in 2..=c as u128 {
                    order = order.saturating_mul(f);
                }
                start += c;
            }
        }
        order
    }

    /// Pairs the subtree under `from` with the one under `to` (same label),
    /// writing `map[x] = image` on subdivision ids. `shuffle` permutes
    /// isomorphic siblings at random; otherwise siblings pair in order.
    fn map_subtree<R: Rng>(&self, from: usize, to: usize, map: &mut [usize], mut rng: Option<&mut R>) {
        let mut stack = vec![(from, to)];
        while let Some((x, y)) = stack.pop() {
            debug_assert_eq!(self.label[x], self.label[y]);
            map[x] = y;
            let cx = &self.children[x];
            let cy = &self.children[y];
            let mut start = 0;
            while start < cx.len() {
                let l = self.label[cx[start]];
                let end = start + cx[start..].iter().take_while(|&&c| self.label[c] == l).count();
                let mut targets: Vec<usize> = cy[start..end].to_vec();
                if let Some(r) = rng.as_deref_mut() {
                    targets.shuffle(r);
                }
                for (k, &c) in cx[start..end].iter().enumerate() {
                    stack.push((c, targets[k]));
                }
                start = end;
            }
        }
    }

    fn restrict(tree: &Tree, map: &[usize]) -> TreeIsom {
        let vertex_map = map[..tree.num_vertices()].to_vec();
        TreeIsom::new(tree, vertex_map).expect("label-preserving map is an automorphism")
    }

    /// A random automorphism (each sibling class shuffled independently).
    pub fn random_automorphism<R: Rng>(&self, tree: &Tree, rng: &mut R) -> TreeIsom {
        let mut map = vec![0; tree.num_points()];
        self.map_subtree(self.root, self.root, &mut map, Some(rng));
        Self::restrict(tree, &map)
    }

    /// Swaps of consecutive isomorphic siblings at every node. These
    /// generate the full automorphism group.
    pub fn generators(&self, tree: &Tree) -> Vec<TreeIsom> {
        let mut out = Vec::new();
        for x in 0..self.children.len() {
            for pair in self.children[x].windows(2) {
                let (a, b) = (pair[0], pair[1]);
                if self.label[a] != self.label[b] {
                    continue;
                }
                let mut map: Vec<usize> = (0..tree.num_points()).collect();
                self.map_subtree::<rand::rngs::ThreadRng>(a, b, &mut map, None);
                self.map_subtree::<rand::rngs::ThreadRng>(b, a, &mut map, None);
                out.push(Self::restrict(tree, &map));
            }
        }
        out
    }
}
