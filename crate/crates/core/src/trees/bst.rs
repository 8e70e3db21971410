use serde::Serialize;

use super::Permutation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub key: usize,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub depth: usize,
}

/// Binary search tree grown by inserting keys in sequence. Nodes are stored
/// in insertion order, so node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bst {
    nodes: Vec<Node>,
    /// `slot[key]` is the node index holding `key`.
    #[serde(skip)]
    slot: Vec<Option<usize>>,
}

impl Bst {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            slot: vec![None],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> Option<&Node> {
        self.nodes.first()
    }

    pub fn node_of(&self, key: usize) -> Option<&Node> {
        self.slot.get(key).copied().flatten().map(|i| &self.nodes[i])
    }

    /// Walks from the root, left for smaller and right for larger keys, and
    /// attaches a new leaf. Returns the depth of the new node.
    pub fn insert(&mut self, key: usize) -> Result<usize> {
        if self.node_of(key).is_some() {
            return Err(Error::Invalid(format!("duplicate key {key}")));
        }
        let idx = self.nodes.len();
        let mut depth = 0;
        if !self.nodes.is_empty() {
            let mut cur = 0;
            loop {
                depth += 1;
                let node = &mut self.nodes[cur];
                let child = if key < node.key { &mut node.left } else { &mut node.right };
                match *child {
                    Some(next) => cur = next,
                    None => {
                        *child = Some(idx);
                        break;
                    }
                }
            }
        }
        self.nodes.push(Node {
            key,
            left: None,
            right: None,
            depth,
        });
        if self.slot.len() <= key {
            self.slot.resize(key + 1, None);
        }
        self.slot[key] = Some(idx);
        Ok(depth)
    }

    /// Keys in symmetric order.
    pub fn in_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = Vec::new();
        let mut cur = if self.nodes.is_empty() { None } else { Some(0) };
        while cur.is_some() || !stack.is_empty() {
            while let Some(i) = cur {
                stack.push(i);
                cur = self.nodes[i].left;
            }
            let i = stack.pop().unwrap();
            out.push(self.nodes[i].key);
            cur = self.nodes[i].right;
        }
        out
    }
}

impl Default for Bst {
    fn default() -> Self {
        Self::new()
    }
}

pub fn build_bst(perm: &Permutation) -> Bst {
    let mut tree = Bst::new();
    for &v in perm.values() {
        tree.insert(v).expect("permutation values are distinct");
    }
    tree
}

/// Number of edges from the root to the node holding `l`.
pub fn node_depth(bst: &Bst, l: usize) -> Result<usize> {
    bst.node_of(l)
        .map(|n| n.depth)
        .ok_or_else(|| Error::Invalid(format!("key {l} not in tree")))
}

/// `d[l - 1]` = depth of key `l`, for `l = 1..=n`.
pub fn depth_plot(perm: &Permutation) -> Vec<usize> {
    let tree = build_bst(perm);
    (1..=perm.len())
        .map(|l| tree.node_of(l).expect("all keys inserted").depth)
        .collect()
}
