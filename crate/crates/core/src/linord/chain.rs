//! Bounded search for strictly descending chains.
//!
//! Absence of a witness is proof of nothing unless the whole (finite) order
//! was exhausted; the three-way outcome keeps that distinction explicit.

use std::cmp::Ordering;

use crate::fuel::{Fuel, Stall};
use crate::linord::order::{Code, Finiteness, LinearOrder};

/// Outcome of a descending-chain search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainSearch {
    /// A strictly descending chain of exactly the requested length,
    /// greatest element first.
    Found(Vec<Code>),
    /// The search space was exhausted: no such chain exists.
    NoneExists,
    /// The budget ran out before the search space was exhausted.
    BudgetExhausted,
}

/// Searches the enumerated prefix of `order` for a strictly descending chain
/// of length `depth`. Deterministic: candidates are scanned in enumeration
/// order with backtracking, so the witness is the lexicographically least in
/// enumeration indices.
pub fn find_descending_chain(order: &LinearOrder, depth: usize, budget: u64) -> ChainSearch {
    assert!(depth >= 1, "depth must be positive");
    if let Finiteness::Finite(n) = order.finiteness() {
        if depth > n {
            return ChainSearch::NoneExists;
        }
    }
    let mut fuel = Fuel::new(budget);
    let mut elems: Vec<Code> = Vec::new();
    let mut ended = false;
    let mut stalled = false;
    let mut chain: Vec<usize> = Vec::new();
    let found = dfs(order, depth, &mut fuel, &mut elems, &mut ended, &mut stalled, &mut chain);
    match found {
        Some(idxs) => ChainSearch::Found(idxs.iter().map(|&i| elems[i]).collect()),
        None if stalled => ChainSearch::BudgetExhausted,
        None => ChainSearch::NoneExists,
    }
}

fn dfs(
    order: &LinearOrder,
    depth: usize,
    fuel: &mut Fuel,
    elems: &mut Vec<Code>,
    ended: &mut bool,
    stalled: &mut bool,
    chain: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if chain.len() == depth {
        return Some(chain.clone());
    }
    let mut j = 0;
    loop {
        if j >= elems.len() {
            if *ended {
                return None;
            }
            match order.nth(elems.len(), fuel) {
                Ok(Some(c)) => elems.push(c),
                Ok(None) => {
                    *ended = true;
                    return None;
                }
                Err(Stall) => {
                    *stalled = true;
                    return None;
                }
            }
        }
        if fuel.consume(1).is_err() {
            *stalled = true;
            return None;
        }
        if !chain.contains(&j) {
            let ok = match chain.last() {
                None => true,
                Some(&last) => matches!(order.compare(elems[j], elems[last]), Ok(Ordering::Less)),
            };
            if ok {
                chain.push(j);
                if let Some(found) = dfs(order, depth, fuel, elems, ended, stalled, chain) {
                    return Some(found);
                }
                chain.pop();
                if *stalled {
                    return None;
                }
            }
        }
        j += 1;
    }
}

/// Re-checks that a reported chain is strictly descending.
pub fn verify_descending(order: &LinearOrder, chain: &[Code]) -> bool {
    chain.windows(2).all(|w| matches!(order.compare(w[1], w[0]), Ok(Ordering::Less)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_star_chain_is_enumeration_prefix() {
        let ws = LinearOrder::omega_star();
        match find_descending_chain(&ws, 5, 10_000) {
            ChainSearch::Found(chain) => {
                assert_eq!(chain, vec![0, 1, 2, 3, 4]);
                assert!(verify_descending(&ws, &chain));
            }
            other => panic!("expected chain, got {other:?}"),
        }
    }

    #[test]
    fn finite_order_pigeonhole() {
        let o = LinearOrder::finite_range(4);
        assert_eq!(find_descending_chain(&o, 5, 10_000), ChainSearch::NoneExists);
        match find_descending_chain(&o, 4, 10_000) {
            ChainSearch::Found(chain) => assert_eq!(chain, vec![3, 2, 1, 0]),
            other => panic!("expected chain, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_not_none() {
        let ws = LinearOrder::omega_star();
        assert_eq!(find_descending_chain(&ws, 50, 30), ChainSearch::BudgetExhausted);
    }

    #[test]
    fn descending_chain_through_descent_tree() {
        use crate::linord::kb::kb_order;
        use crate::linord::tree::{DescendingSeqTree, Tree};
        let t = Tree::new(DescendingSeqTree::new(LinearOrder::omega_star()));
        let kb = kb_order(&t);
        match find_descending_chain(&kb.order(), 4, 500_000) {
            ChainSearch::Found(chain) => {
                assert!(verify_descending(&kb.order(), &chain));
                // The witness is a nested family of descending sequences.
                let mut fuel = Fuel::unlimited();
                let nodes: Vec<Vec<u64>> = chain
                    .iter()
                    .map(|&c| kb.node_of(c, &mut fuel).unwrap().unwrap())
                    .collect();
                for w in nodes.windows(2) {
                    assert!(
                        w[1].len() > w[0].len() || w[1] < w[0],
                        "chain should descend: {nodes:?}"
                    );
                }
            }
            other => panic!("expected chain, got {other:?}"),
        }
    }
}
