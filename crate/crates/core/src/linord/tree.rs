//! Trees of finite sequences, prefix-closed, with lazily enumerable children.
//!
//! A tree presents decidable membership and a per-node child probe. Probes do
//! bounded work per step so that infinitely branching nodes (and child
//! filters that scan forever) cannot starve a fair enumeration of the whole
//! tree.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::fuel::{Fuel, Stall};

/// One probing step of a child enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Probe<L> {
    /// Found the next child label.
    Child(L),
    /// No further children exist.
    Exhausted,
    /// Did bounded work without finding a child yet; call again.
    Pending,
}

/// Resumable child-label enumeration for one node.
pub trait ChildProbe<L>: Send {
    fn next(&mut self, fuel: &mut Fuel) -> Result<Probe<L>, Stall>;
}

/// A tree over labels `L`; nodes are label sequences closed under prefixes.
pub trait TreeKernel<L: Clone + Ord + Send + 'static>: Send + Sync {
    fn contains(&self, node: &[L], fuel: &mut Fuel) -> Result<bool, Stall>;
    fn child_probe(&self, node: &[L]) -> Box<dyn ChildProbe<L>>;
    /// Total node count when known finite.
    fn node_count(&self) -> Option<usize> {
        None
    }
}

/// A tree of finite sequences of naturals.
#[derive(Clone)]
pub struct Tree {
    kernel: Arc<dyn TreeKernel<u64>>,
}

impl Tree {
    pub fn new(kernel: impl TreeKernel<u64> + 'static) -> Self {
        Tree { kernel: Arc::new(kernel) }
    }

    pub fn kernel(&self) -> &Arc<dyn TreeKernel<u64>> {
        &self.kernel
    }

    pub fn contains(&self, node: &[u64], fuel: &mut Fuel) -> Result<bool, Stall> {
        self.kernel.contains(node, fuel)
    }

    pub fn node_count(&self) -> Option<usize> {
        self.kernel.node_count()
    }

    /// Parses the JSON serialization: an array of integer arrays, closed
    /// under prefixes.
    pub fn from_json(text: &str) -> Result<Tree, TreeError> {
        let nodes: Vec<Vec<u64>> =
            serde_json::from_str(text).map_err(|e| TreeError::Json(e.to_string()))?;
        Ok(Tree::new(FiniteTree::new(nodes)?))
    }

    pub fn to_json(&self) -> Option<String> {
        let count = self.node_count()?;
        let mut fuel = Fuel::unlimited();
        let mut names = Vec::with_capacity(count);
        let mut dov = Dovetail::new_for_tree(self.kernel.clone());
        while let Ok(Some(node)) = dov.poll(&mut fuel) {
            names.push(node);
        }
        names.sort();
        Some(serde_json::to_string(&names).unwrap())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("invalid tree JSON: {0}")]
    Json(String),
    #[error("tree is not prefix-closed: missing prefix of {0:?}")]
    NotPrefixClosed(Vec<u64>),
    #[error("duplicate node {0:?}")]
    DuplicateNode(Vec<u64>),
}

/// An explicit finite tree.
pub struct FiniteTree {
    nodes: BTreeSet<Vec<u64>>,
}

impl FiniteTree {
    pub fn new(list: Vec<Vec<u64>>) -> Result<Self, TreeError> {
        let mut nodes = BTreeSet::new();
        for n in list {
            if !nodes.insert(n.clone()) {
                return Err(TreeError::DuplicateNode(n));
            }
        }
        for n in &nodes {
            if !n.is_empty() {
                let parent = &n[..n.len() - 1];
                if !nodes.contains(parent) {
                    return Err(TreeError::NotPrefixClosed(n.clone()));
                }
            }
        }
        Ok(FiniteTree { nodes })
    }

    /// The full binary tree of the given depth (root at depth 0).
    pub fn full_binary(depth: usize) -> Self {
        let mut list = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..depth {
            let mut next = Vec::new();
            for n in &frontier {
                for b in 0..2u64 {
                    let mut c = n.clone();
                    c.push(b);
                    list.push(c.clone());
                    next.push(c);
                }
            }
            frontier = next;
        }
        FiniteTree::new(list).expect("constructed prefix-closed")
    }
}

struct ListProbe {
    items: Vec<u64>,
    pos: usize,
}

impl ChildProbe<u64> for ListProbe {
    fn next(&mut self, fuel: &mut Fuel) -> Result<Probe<u64>, Stall> {
        fuel.consume(1)?;
        if self.pos < self.items.len() {
            self.pos += 1;
            Ok(Probe::Child(self.items[self.pos - 1]))
        } else {
            Ok(Probe::Exhausted)
        }
    }
}

impl TreeKernel<u64> for FiniteTree {
    fn contains(&self, node: &[u64], _fuel: &mut Fuel) -> Result<bool, Stall> {
        Ok(self.nodes.contains(node))
    }

    fn child_probe(&self, node: &[u64]) -> Box<dyn ChildProbe<u64>> {
        let mut items: Vec<u64> = self
            .nodes
            .iter()
            .filter(|n| n.len() == node.len() + 1 && n.starts_with(node))
            .map(|n| n[n.len() - 1])
            .collect();
        items.sort_unstable();
        Box::new(ListProbe { items, pos: 0 })
    }

    fn node_count(&self) -> Option<usize> {
        Some(self.nodes.len())
    }
}

/// Fair round-based enumeration of all nodes of a tree. Each round pulls one
/// probe step from every node discovered before the round started, so every
/// node of the tree is eventually produced even with infinite branching or
/// forever-pending probes.
pub struct Dovetail<L: Clone + Ord + Send + 'static> {
    entries: Vec<Entry<L>>,
    cursor: usize,
    round_len: usize,
    started: bool,
    make_probe: Box<dyn Fn(&[L]) -> Box<dyn ChildProbe<L>> + Send>,
}

struct Entry<L> {
    node: Vec<L>,
    probe: Box<dyn ChildProbe<L>>,
    done: bool,
}

impl<L: Clone + Ord + Send + 'static> Dovetail<L> {
    pub fn new(make_probe: impl Fn(&[L]) -> Box<dyn ChildProbe<L>> + Send + 'static) -> Self {
        Dovetail {
            entries: Vec::new(),
            cursor: 0,
            round_len: 0,
            started: false,
            make_probe: Box::new(make_probe),
        }
    }

    /// Produces the next discovered node; the root is produced first.
    pub fn poll(&mut self, fuel: &mut Fuel) -> Result<Option<Vec<L>>, Stall> {
        if !self.started {
            self.started = true;
            let root: Vec<L> = Vec::new();
            let probe = (self.make_probe)(&root);
            self.entries.push(Entry { node: root.clone(), probe, done: false });
            self.round_len = 1;
            self.cursor = 0;
            return Ok(Some(root));
        }
        loop {
            fuel.consume(1)?;
            if self.entries.iter().all(|e| e.done) {
                return Ok(None);
            }
            if self.cursor >= self.round_len {
                // Round over: next round covers everything discovered so far.
                self.cursor = 0;
                self.round_len = self.entries.len();
            }
            let i = self.cursor;
            self.cursor += 1;
            if self.entries[i].done {
                continue;
            }
            match self.entries[i].probe.next(fuel)? {
                Probe::Child(label) => {
                    let mut node = self.entries[i].node.clone();
                    node.push(label);
                    let probe = (self.make_probe)(&node);
                    self.entries.push(Entry { node: node.clone(), probe, done: false });
                    return Ok(Some(node));
                }
                Probe::Exhausted => self.entries[i].done = true,
                Probe::Pending => {}
            }
        }
    }
}

impl Dovetail<u64> {
    pub fn new_for_tree(kernel: Arc<dyn TreeKernel<u64>>) -> Self {
        Dovetail::new(move |node| kernel.child_probe(node))
    }
}

/// Kleene-Brouwer comparison of two nodes: a proper extension is smaller;
/// otherwise the first divergence decides by label order.
pub fn kb_compare<L: Ord>(s: &[L], t: &[L]) -> std::cmp::Ordering {
    let n = s.len().min(t.len());
    for i in 0..n {
        match s[i].cmp(&t[i]) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    t.len().cmp(&s.len())
}

/// The tree of strictly descending finite sequences through an order, with
/// element codes as labels. Infinitely branching whenever the order is
/// infinite.
pub struct DescendingSeqTree {
    order: crate::linord::order::LinearOrder,
}

impl DescendingSeqTree {
    pub fn new(order: crate::linord::order::LinearOrder) -> Self {
        DescendingSeqTree { order }
    }
}

struct DescProbe {
    order: crate::linord::order::LinearOrder,
    below: Option<u64>,
    idx: usize,
}

impl ChildProbe<u64> for DescProbe {
    fn next(&mut self, fuel: &mut Fuel) -> Result<Probe<u64>, Stall> {
        fuel.consume(1)?;
        match self.order.nth(self.idx, fuel)? {
            None => Ok(Probe::Exhausted),
            Some(c) => {
                self.idx += 1;
                match self.below {
                    None => Ok(Probe::Child(c)),
                    Some(b) => match self.order.compare(c, b) {
                        Ok(std::cmp::Ordering::Less) => Ok(Probe::Child(c)),
                        Ok(_) => Ok(Probe::Pending),
                        Err(_) => Ok(Probe::Pending),
                    },
                }
            }
        }
    }
}

impl TreeKernel<u64> for DescendingSeqTree {
    fn contains(&self, node: &[u64], fuel: &mut Fuel) -> Result<bool, Stall> {
        for w in node.windows(2) {
            match self.order.compare(w[1], w[0]) {
                Ok(std::cmp::Ordering::Less) => {}
                _ => return Ok(false),
            }
        }
        for &c in node {
            if !self.order.contains(c, fuel)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn child_probe(&self, node: &[u64]) -> Box<dyn ChildProbe<u64>> {
        Box::new(DescProbe { order: self.order.clone(), below: node.last().copied(), idx: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linord::order::LinearOrder;

    #[test]
    fn kb_compare_examples() {
        use std::cmp::Ordering::*;
        assert_eq!(kb_compare(&[1u64, 0], &[1]), Less); // proper extension
        assert_eq!(kb_compare(&[0u64, 5], &[1]), Less); // first divergence 0 < 1
        assert_eq!(kb_compare(&[1u64], &[1]), Equal);
        assert_eq!(kb_compare(&[2u64], &[1, 9]), Greater);
    }

    #[test]
    fn finite_tree_validation() {
        assert!(Tree::from_json("[[],[0],[1],[0,0]]").is_ok());
        let bad = Tree::from_json("[[0,0]]");
        assert!(matches!(bad, Err(TreeError::NotPrefixClosed(_))));
        let dup = Tree::from_json("[[],[0],[0]]");
        assert!(matches!(dup, Err(TreeError::DuplicateNode(_))));
    }

    #[test]
    fn dovetail_enumerates_finite_tree() {
        let t = Tree::new(FiniteTree::full_binary(2));
        let mut dov = Dovetail::new_for_tree(t.kernel().clone());
        let mut fuel = Fuel::unlimited();
        let mut seen = Vec::new();
        while let Some(n) = dov.poll(&mut fuel).unwrap() {
            seen.push(n);
        }
        assert_eq!(seen.len(), 7);
        assert_eq!(seen[0], Vec::<u64>::new());
    }

    #[test]
    fn dovetail_is_fair_on_infinite_branching() {
        // Descending sequences through ω*: the root has infinitely many
        // children, yet depth-2 nodes must still be discovered.
        let t = Tree::new(DescendingSeqTree::new(LinearOrder::omega_star()));
        let mut dov = Dovetail::new_for_tree(t.kernel().clone());
        let mut fuel = Fuel::new(100_000);
        let mut found_depth2 = false;
        for _ in 0..200 {
            match dov.poll(&mut fuel) {
                Ok(Some(n)) => {
                    if n.len() == 2 {
                        found_depth2 = true;
                        break;
                    }
                }
                _ => break,
            }
        }
        assert!(found_depth2);
    }
}
