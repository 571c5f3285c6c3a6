//! Kleene-Brouwer order of a tree.
//!
//! Element codes are node codes: positions in the canonical fair enumeration
//! of tree nodes. Comparison decodes both nodes and applies the KB rule
//! directly, so it agrees with the definition on every pair regardless of
//! discovery order.

use std::cmp::Ordering;
use std::sync::{Arc, Mutex};

use crate::fuel::{Fuel, MemoStream, Stall, DEFAULT_FUEL};
use crate::linord::order::{Code, Finiteness, LinearOrder, OrderError, OrderKernel};
use crate::linord::tree::{kb_compare, Dovetail, Tree};

/// The KB order of a tree, with node decoding for display and tests.
#[derive(Clone)]
pub struct KbOrder {
    kernel: Arc<KbKernel>,
}

struct KbKernel {
    tree: Tree,
    memo: MemoStream<Vec<u64>>,
    expr: Option<String>,
}

impl KbOrder {
    pub fn new(tree: Tree) -> Self {
        Self::with_expression(tree, None)
    }

    pub fn with_expression(tree: Tree, expr: Option<String>) -> Self {
        let dov = Mutex::new(Dovetail::new_for_tree(tree.kernel().clone()));
        let memo = MemoStream::new(move |fuel: &mut Fuel| dov.lock().unwrap().poll(fuel));
        KbOrder { kernel: Arc::new(KbKernel { tree, memo, expr }) }
    }

    pub fn order(&self) -> LinearOrder {
        LinearOrder::from_arc(self.kernel.clone() as Arc<dyn OrderKernel>)
    }

    pub fn tree(&self) -> &Tree {
        self.kernel.tree()
    }

    /// The node behind a code.
    pub fn node_of(&self, code: Code, fuel: &mut Fuel) -> Result<Option<Vec<u64>>, Stall> {
        self.kernel.memo.get(code as usize, fuel)
    }

    /// The code of a node, scanning the enumeration.
    pub fn code_of(&self, node: &[u64], fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        Ok(self.kernel.memo.position(|n| n == node, fuel)?.map(|i| i as Code))
    }

    /// Compares two nodes directly by the KB rule.
    pub fn compare_nodes(&self, s: &[u64], t: &[u64]) -> Ordering {
        kb_compare(s, t)
    }

    /// All nodes in ascending KB order (finite trees only).
    pub fn sorted_nodes(&self) -> Option<Vec<Vec<u64>>> {
        let count = self.kernel.tree.node_count()?;
        let mut fuel = Fuel::unlimited();
        let mut nodes = Vec::with_capacity(count);
        let mut i = 0;
        while let Ok(Some(n)) = self.kernel.memo.get(i, &mut fuel) {
            nodes.push(n);
            i += 1;
        }
        nodes.sort_by(|a, b| kb_compare(a, b));
        Some(nodes)
    }
}

impl KbKernel {
    fn tree(&self) -> &Tree {
        &self.tree
    }

    fn decode(&self, code: Code) -> Result<Vec<u64>, OrderError> {
        let mut fuel = Fuel::new(DEFAULT_FUEL);
        match self.memo.get(code as usize, &mut fuel) {
            Ok(Some(n)) => Ok(n),
            Ok(None) => Err(OrderError::UnknownElement(code)),
            Err(Stall) => Err(OrderError::Budget(code)),
        }
    }
}

impl OrderKernel for KbKernel {
    fn nth(&self, i: usize, fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        Ok(self.memo.get(i, fuel)?.map(|_| i as Code))
    }

    fn contains(&self, code: Code, fuel: &mut Fuel) -> Result<bool, Stall> {
        Ok(self.memo.get(code as usize, fuel)?.is_some())
    }

    fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError> {
        let nx = self.decode(x)?;
        let ny = self.decode(y)?;
        Ok(kb_compare(&nx, &ny))
    }

    fn finiteness(&self) -> Finiteness {
        match self.tree.node_count() {
            Some(n) => Finiteness::Finite(n),
            None => Finiteness::Unknown,
        }
    }

    fn describe(&self, code: Code) -> String {
        match self.decode(code) {
            Ok(node) => {
                let parts: Vec<String> = node.iter().map(|l| l.to_string()).collect();
                format!("({})", parts.join(","))
            }
            Err(_) => format!("#{code}"),
        }
    }

    fn expression(&self) -> Option<String> {
        self.expr.clone()
    }
}

/// The KB order of a tree.
pub fn kb_order(tree: &Tree) -> KbOrder {
    KbOrder::new(tree.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linord::tree::FiniteTree;

    #[test]
    fn binary_depth_two_listing() {
        // KB ascending: (0,0),(0,1),(0),(1,0),(1,1),(1),()
        let kb = kb_order(&Tree::new(FiniteTree::full_binary(2)));
        let sorted = kb.sorted_nodes().unwrap();
        let expected: Vec<Vec<u64>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![0],
            vec![1, 0],
            vec![1, 1],
            vec![1],
            vec![],
        ];
        assert_eq!(sorted, expected);
    }

    #[test]
    fn kb_codes_agree_with_nodes() {
        let kb = kb_order(&Tree::new(FiniteTree::full_binary(2)));
        let order = kb.order();
        let mut fuel = Fuel::unlimited();
        let codes = order.prefix(7, &mut fuel).unwrap();
        assert_eq!(codes.len(), 7);
        for &x in &codes {
            for &y in &codes {
                let nx = kb.node_of(x, &mut fuel).unwrap().unwrap();
                let ny = kb.node_of(y, &mut fuel).unwrap().unwrap();
                assert_eq!(order.compare(x, y).unwrap(), kb_compare(&nx, &ny));
            }
        }
        crate::linord::order::check_linear_prefix(&order, 7, &mut fuel).unwrap();
    }
}
