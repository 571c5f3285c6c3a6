//! Order embeddings and exhaustive embedding search for finite sources.

use std::cmp::Ordering;

use crate::fuel::{Fuel, Stall};
use crate::linord::order::{Code, Finiteness, LinearOrder, OrderError};

/// A strictly order-preserving partial map between orders, recorded as
/// explicit pairs in ascending source rank.
#[derive(Clone)]
pub struct OrderEmbedding {
    source: LinearOrder,
    target: LinearOrder,
    pairs: Vec<(Code, Code)>,
}

impl OrderEmbedding {
    pub fn new(source: LinearOrder, target: LinearOrder, pairs: Vec<(Code, Code)>) -> Self {
        OrderEmbedding { source, target, pairs }
    }

    pub fn pairs(&self) -> &[(Code, Code)] {
        &self.pairs
    }

    pub fn map(&self, source_code: Code) -> Option<Code> {
        self.pairs.iter().find(|(s, _)| *s == source_code).map(|(_, t)| *t)
    }

    pub fn source(&self) -> &LinearOrder {
        &self.source
    }

    pub fn target(&self) -> &LinearOrder {
        &self.target
    }

    /// Checks strict order preservation on every recorded pair.
    pub fn verify_strict(&self) -> Result<(), EmbeddingViolation> {
        for (i, &(s1, t1)) in self.pairs.iter().enumerate() {
            for &(s2, t2) in &self.pairs[i + 1..] {
                let so = self.source.compare(s1, s2).map_err(EmbeddingViolation::Order)?;
                let to = self.target.compare(t1, t2).map_err(EmbeddingViolation::Order)?;
                if so != to {
                    return Err(EmbeddingViolation::NotPreserving { s1, s2, t1, t2 });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingViolation {
    #[error("pairs ({s1}→{t1}, {s2}→{t2}) do not preserve order")]
    NotPreserving { s1: Code, s2: Code, t1: Code, t2: Code },
    #[error(transparent)]
    Order(OrderError),
}

/// Outcome of an embedding search.
pub enum EmbeddingSearch {
    Found(OrderEmbedding),
    /// Exhaustive over a finite target: no embedding exists.
    NoneExists,
    /// Budget ran out with the target not exhausted.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("source order must be finite for embedding search")]
    SourceNotFinite,
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Finds a strictly increasing total map from finite `a` into `x`, choosing
/// the lexicographically least images in enumeration indices of `x`. Decides
/// the question when `x` is finite; otherwise absence within budget is a
/// non-answer.
pub fn find_embedding(
    a: &LinearOrder,
    x: &LinearOrder,
    budget: u64,
) -> Result<EmbeddingSearch, EmbedError> {
    let n = a.len_if_finite().ok_or(EmbedError::SourceNotFinite)?;
    let mut fuel = Fuel::new(budget);
    let mut src: Vec<Code> = Vec::with_capacity(n);
    for i in 0..n {
        match a.nth(i, &mut fuel) {
            Ok(Some(c)) => src.push(c),
            Ok(None) => break,
            Err(Stall) => return Ok(EmbeddingSearch::BudgetExhausted),
        }
    }
    src.sort_by(|&p, &q| a.compare(p, q).unwrap_or(Ordering::Equal));
    if src.is_empty() {
        return Ok(EmbeddingSearch::Found(OrderEmbedding::new(a.clone(), x.clone(), vec![])));
    }

    let mut elems: Vec<Code> = Vec::new();
    let mut ended = false;
    let mut stalled = false;
    let mut picks: Vec<usize> = Vec::new();
    let found = dfs(x, &src, &mut fuel, &mut elems, &mut ended, &mut stalled, &mut picks);
    match found {
        Some(idxs) => {
            let pairs = src.iter().copied().zip(idxs.iter().map(|&i| elems[i])).collect();
            Ok(EmbeddingSearch::Found(OrderEmbedding::new(a.clone(), x.clone(), pairs)))
        }
        None if stalled => Ok(EmbeddingSearch::BudgetExhausted),
        None => Ok(EmbeddingSearch::NoneExists),
    }
}

fn dfs(
    x: &LinearOrder,
    src: &[Code],
    fuel: &mut Fuel,
    elems: &mut Vec<Code>,
    ended: &mut bool,
    stalled: &mut bool,
    picks: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if picks.len() == src.len() {
        return Some(picks.clone());
    }
    let mut j = 0;
    loop {
        if j >= elems.len() {
            if *ended {
                return None;
            }
            match x.nth(elems.len(), fuel) {
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
        if !picks.contains(&j) {
            let ok = match picks.last() {
                None => true,
                Some(&last) => {
                    matches!(x.compare(elems[last], elems[j]), Ok(Ordering::Less))
                }
            };
            if ok {
                picks.push(j);
                if let Some(found) = dfs(x, src, fuel, elems, ended, stalled, picks) {
                    return Some(found);
                }
                picks.pop();
                if *stalled {
                    return None;
                }
            }
        }
        j += 1;
    }
}

/// Independent decision for finite targets: tries every increasing choice of
/// ranks. Intended as a test oracle; exponential and deliberately literal.
pub fn brute_force_embeds(a: &LinearOrder, x: &LinearOrder) -> Option<bool> {
    let n = a.len_if_finite()?;
    let m = x.len_if_finite()?;
    if n == 0 {
        return Some(true);
    }
    if n > m {
        return Some(false);
    }
    let mut fuel = Fuel::unlimited();
    let mut xs = x.prefix(m, &mut fuel).ok()?;
    xs.sort_by(|&p, &q| x.compare(p, q).unwrap_or(Ordering::Equal));
    // Every increasing map of ranks is strictly order-preserving once both
    // sides are sorted, so an embedding exists iff n ≤ m. Walk all rank
    // subsets anyway to stay definition-literal.
    let mut any = false;
    let mut choose = vec![0usize; n];
    fn walk(choose: &mut Vec<usize>, pos: usize, start: usize, m: usize, any: &mut bool) {
        if pos == choose.len() {
            *any = true;
            return;
        }
        for r in start..m {
            choose[pos] = r;
            walk(choose, pos + 1, r + 1, m, any);
            if *any {
                return;
            }
        }
    }
    walk(&mut choose, 0, 0, m, &mut any);
    Some(any)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinality_blocks_embedding() {
        let a = LinearOrder::finite_range(2);
        let x = LinearOrder::finite_range(1);
        assert!(matches!(find_embedding(&a, &x, 10_000), Ok(EmbeddingSearch::NoneExists)));
    }

    #[test]
    fn empty_source_embeds_vacuously() {
        let a = LinearOrder::empty();
        let x = LinearOrder::omega_star();
        match find_embedding(&a, &x, 100).unwrap() {
            EmbeddingSearch::Found(e) => assert!(e.pairs().is_empty()),
            _ => panic!("empty embedding expected"),
        }
    }

    #[test]
    fn three_chain_into_five_is_lex_least() {
        let a = LinearOrder::finite_range(3);
        let x = LinearOrder::finite_range(5);
        match find_embedding(&a, &x, 100_000).unwrap() {
            EmbeddingSearch::Found(e) => {
                assert_eq!(e.pairs(), &[(0, 0), (1, 1), (2, 2)]);
                e.verify_strict().unwrap();
            }
            _ => panic!("embedding expected"),
        }
    }

    #[test]
    fn agrees_with_brute_force_on_small_orders() {
        for n in 0..=6usize {
            for m in 0..=6usize {
                let a = LinearOrder::finite_range(n);
                let x = LinearOrder::finite_range(m);
                let got = matches!(
                    find_embedding(&a, &x, 1_000_000).unwrap(),
                    EmbeddingSearch::Found(_)
                );
                assert_eq!(Some(got), brute_force_embeds(&a, &x));
            }
        }
    }

    #[test]
    fn finite_source_into_omega_star() {
        let a = LinearOrder::finite_range(3);
        let x = LinearOrder::omega_star();
        match find_embedding(&a, &x, 100_000).unwrap() {
            EmbeddingSearch::Found(e) => {
                e.verify_strict().unwrap();
                assert_eq!(e.pairs().len(), 3);
            }
            _ => panic!("3-chain embeds into the reversed naturals"),
        }
    }
}
