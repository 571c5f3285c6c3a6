//! Countable linear orders presented by an ω-enumeration plus decidable
//! comparison on element codes.
//!
//! An order never materializes more than callers ask for. Element codes are
//! plain `u64`s whose meaning is kernel-specific: explicit finite orders use
//! the listed codes, the reversed-ω order uses the naturals themselves, and
//! derived orders (sums, Kleene-Brouwer orders, evaluated term systems) code
//! an element by its position in the canonical enumeration.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::fuel::{Fuel, MemoStream, Stall, DEFAULT_FUEL};

/// Element code of a linear order.
pub type Code = u64;

/// Cardinality knowledge about an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Finiteness {
    Finite(usize),
    Infinite,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrderError {
    #[error("code {0} is not an element of the order")]
    UnknownElement(Code),
    #[error("budget exhausted while resolving code {0}")]
    Budget(Code),
}

/// Behaviour of one concrete order. All methods must be deterministic and
/// reentrant; memoization inside a kernel must be observationally invisible.
pub trait OrderKernel: Send + Sync {
    /// The `i`-th element of the ω-enumeration; `Ok(None)` once exhausted.
    /// The enumeration never repeats a code.
    fn nth(&self, i: usize, fuel: &mut Fuel) -> Result<Option<Code>, Stall>;

    /// Decidable membership for arbitrary codes.
    fn contains(&self, code: Code, fuel: &mut Fuel) -> Result<bool, Stall>;

    /// Total comparison on member codes.
    fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError>;

    fn finiteness(&self) -> Finiteness;

    /// Optional order-type annotation, e.g. `"w*"`.
    fn order_type(&self) -> Option<String> {
        None
    }

    /// Human-readable rendering of one element.
    fn describe(&self, code: Code) -> String {
        code.to_string()
    }

    /// Re-parseable source expression, when the order was built from one.
    fn expression(&self) -> Option<String> {
        None
    }
}

/// A countable linear order. Cheap to clone; all sharing is internal.
#[derive(Clone)]
pub struct LinearOrder {
    kernel: Arc<dyn OrderKernel>,
}

impl fmt::Debug for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearOrder({})", self.kernel.expression().unwrap_or_else(|| "<anonymous>".into()))
    }
}

impl LinearOrder {
    pub fn new(kernel: impl OrderKernel + 'static) -> Self {
        LinearOrder { kernel: Arc::new(kernel) }
    }

    pub fn from_arc(kernel: Arc<dyn OrderKernel>) -> Self {
        LinearOrder { kernel }
    }

    pub fn nth(&self, i: usize, fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        self.kernel.nth(i, fuel)
    }

    pub fn contains(&self, code: Code, fuel: &mut Fuel) -> Result<bool, Stall> {
        self.kernel.contains(code, fuel)
    }

    pub fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError> {
        self.kernel.compare(x, y)
    }

    pub fn finiteness(&self) -> Finiteness {
        self.kernel.finiteness()
    }

    pub fn order_type(&self) -> Option<String> {
        self.kernel.order_type()
    }

    pub fn describe(&self, code: Code) -> String {
        self.kernel.describe(code)
    }

    pub fn expression(&self) -> Option<String> {
        self.kernel.expression()
    }

    /// First `k` enumerated elements (fewer if the order is smaller).
    pub fn prefix(&self, k: usize, fuel: &mut Fuel) -> Result<Vec<Code>, Stall> {
        let mut out = Vec::new();
        for i in 0..k {
            match self.nth(i, fuel)? {
                Some(c) => out.push(c),
                None => break,
            }
        }
        Ok(out)
    }

    /// Exact size when the order is known finite.
    pub fn len_if_finite(&self) -> Option<usize> {
        match self.finiteness() {
            Finiteness::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len_if_finite() == Some(0)
    }

    /// The canonical finite order `0 < 1 < … < n-1` with codes equal to ranks.
    pub fn finite_range(n: usize) -> LinearOrder {
        let codes = (0..n as u64).collect();
        LinearOrder::new(FinOrder::new(codes).expect("range codes are distinct"))
    }

    pub fn empty() -> LinearOrder {
        LinearOrder::finite_range(0)
    }

    /// Explicit finite order; `codes` lists elements in ascending rank.
    pub fn from_ranked_codes(codes: Vec<Code>) -> Result<LinearOrder, DuplicateCode> {
        Ok(LinearOrder::new(FinOrder::new(codes)?))
    }

    /// ω*: the naturals ordered in reverse, enumerated `0, 1, 2, …` so the
    /// enumeration itself is an infinite descending sequence.
    pub fn omega_star() -> LinearOrder {
        LinearOrder::new(OmegaStar)
    }

    /// Ordered sum: every element of `a` below every element of `b`.
    pub fn sum(a: &LinearOrder, b: &LinearOrder) -> LinearOrder {
        LinearOrder::new(SumOrder::new(a.clone(), b.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("duplicate element code {0} in finite order")]
pub struct DuplicateCode(pub Code);

/// Explicit finite order over listed codes.
pub struct FinOrder {
    codes: Vec<Code>,
    rank: std::collections::HashMap<Code, usize>,
}

impl FinOrder {
    pub fn new(codes: Vec<Code>) -> Result<Self, DuplicateCode> {
        let mut rank = std::collections::HashMap::with_capacity(codes.len());
        for (i, &c) in codes.iter().enumerate() {
            if rank.insert(c, i).is_some() {
                return Err(DuplicateCode(c));
            }
        }
        Ok(FinOrder { codes, rank })
    }
}

impl OrderKernel for FinOrder {
    fn nth(&self, i: usize, _fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        Ok(self.codes.get(i).copied())
    }

    fn contains(&self, code: Code, _fuel: &mut Fuel) -> Result<bool, Stall> {
        Ok(self.rank.contains_key(&code))
    }

    fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError> {
        let rx = *self.rank.get(&x).ok_or(OrderError::UnknownElement(x))?;
        let ry = *self.rank.get(&y).ok_or(OrderError::UnknownElement(y))?;
        Ok(rx.cmp(&ry))
    }

    fn finiteness(&self) -> Finiteness {
        Finiteness::Finite(self.codes.len())
    }

    fn order_type(&self) -> Option<String> {
        Some(self.codes.len().to_string())
    }

    fn expression(&self) -> Option<String> {
        let items: Vec<String> = self.codes.iter().map(|c| c.to_string()).collect();
        Some(format!("fin:[{}]", items.join(",")))
    }
}

/// The reversed naturals. `x < y` in the order iff `x > y` as numbers.
pub struct OmegaStar;

impl OrderKernel for OmegaStar {
    fn nth(&self, i: usize, _fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        Ok(Some(i as Code))
    }

    fn contains(&self, _code: Code, _fuel: &mut Fuel) -> Result<bool, Stall> {
        Ok(true)
    }

    fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError> {
        Ok(y.cmp(&x))
    }

    fn finiteness(&self) -> Finiteness {
        Finiteness::Infinite
    }

    fn order_type(&self) -> Option<String> {
        Some("w*".into())
    }

    fn expression(&self) -> Option<String> {
        Some("ws".into())
    }
}

/// Ordered sum of two orders. Codes are positions in the interleaved
/// enumeration; comparison decodes to (side, inner code).
pub struct SumOrder {
    left: LinearOrder,
    right: LinearOrder,
    memo: MemoStream<(u8, Code)>,
}

impl SumOrder {
    pub fn new(left: LinearOrder, right: LinearOrder) -> Self {
        let l = left.clone();
        let r = right.clone();
        let mut li = 0usize;
        let mut ri = 0usize;
        let mut ldone = false;
        let mut rdone = false;
        let mut pull_left = true;
        let memo = MemoStream::new(move |fuel: &mut Fuel| loop {
            fuel.consume(1)?;
            if ldone && rdone {
                return Ok(None);
            }
            let side_left = if ldone {
                false
            } else if rdone {
                true
            } else {
                pull_left
            };
            pull_left = !pull_left;
            if side_left {
                match l.nth(li, fuel)? {
                    Some(c) => {
                        li += 1;
                        return Ok(Some((0, c)));
                    }
                    None => ldone = true,
                }
            } else {
                match r.nth(ri, fuel)? {
                    Some(c) => {
                        ri += 1;
                        return Ok(Some((1, c)));
                    }
                    None => rdone = true,
                }
            }
        });
        SumOrder { left, right, memo }
    }

    fn decode(&self, code: Code) -> Result<(u8, Code), OrderError> {
        let mut fuel = Fuel::new(DEFAULT_FUEL);
        match self.memo.get(code as usize, &mut fuel) {
            Ok(Some(pair)) => Ok(pair),
            Ok(None) => Err(OrderError::UnknownElement(code)),
            Err(Stall) => Err(OrderError::Budget(code)),
        }
    }
}

impl OrderKernel for SumOrder {
    fn nth(&self, i: usize, fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        Ok(self.memo.get(i, fuel)?.map(|_| i as Code))
    }

    fn contains(&self, code: Code, fuel: &mut Fuel) -> Result<bool, Stall> {
        Ok(self.memo.get(code as usize, fuel)?.is_some())
    }

    fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError> {
        let (sx, cx) = self.decode(x)?;
        let (sy, cy) = self.decode(y)?;
        match sx.cmp(&sy) {
            Ordering::Equal => {
                if sx == 0 {
                    self.left.compare(cx, cy)
                } else {
                    self.right.compare(cx, cy)
                }
            }
            o => Ok(o),
        }
    }

    fn finiteness(&self) -> Finiteness {
        match (self.left.finiteness(), self.right.finiteness()) {
            (Finiteness::Finite(a), Finiteness::Finite(b)) => Finiteness::Finite(a + b),
            (Finiteness::Infinite, _) | (_, Finiteness::Infinite) => Finiteness::Infinite,
            _ => Finiteness::Unknown,
        }
    }

    fn describe(&self, code: Code) -> String {
        match self.decode(code) {
            Ok((0, c)) => format!("L:{}", self.left.describe(c)),
            Ok((_, c)) => format!("R:{}", self.right.describe(c)),
            Err(_) => format!("#{code}"),
        }
    }

    fn expression(&self) -> Option<String> {
        Some(format!("sum({},{})", self.left.expression()?, self.right.expression()?))
    }
}

/// Exhaustively checks totality, antisymmetry, and transitivity of `compare`
/// on the first `k` enumerated elements.
pub fn check_linear_prefix(order: &LinearOrder, k: usize, fuel: &mut Fuel) -> Result<(), String> {
    let prefix = order.prefix(k, fuel).map_err(|_| "budget exhausted".to_string())?;
    let n = prefix.len();
    let mut table = vec![vec![Ordering::Equal; n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = order
                .compare(prefix[i], prefix[j])
                .map_err(|e| format!("compare failed: {e}"))?;
        }
    }
    for i in 0..n {
        if table[i][i] != Ordering::Equal {
            return Err(format!("irreflexive equality at code {}", prefix[i]));
        }
        for j in 0..n {
            if i != j && table[i][j] == Ordering::Equal {
                return Err(format!(
                    "distinct codes {} and {} compare equal",
                    prefix[i], prefix[j]
                ));
            }
            if table[i][j] != table[j][i].reverse() {
                return Err(format!("asymmetry violated at {} vs {}", prefix[i], prefix[j]));
            }
            for l in 0..n {
                if table[i][j] == Ordering::Less && table[j][l] == Ordering::Less
                    && table[i][l] != Ordering::Less
                {
                    return Err(format!(
                        "transitivity violated at {}, {}, {}",
                        prefix[i], prefix[j], prefix[l]
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_order_compare_table() {
        // Elements {5, 2, 9} ranked 2 < 5 < 9.
        let o = LinearOrder::from_ranked_codes(vec![2, 5, 9]).unwrap();
        assert_eq!(o.compare(5, 9).unwrap(), Ordering::Less);
        assert_eq!(o.compare(9, 2).unwrap(), Ordering::Greater);
        assert_eq!(o.compare(5, 5).unwrap(), Ordering::Equal);
        assert_eq!(o.compare(7, 5), Err(OrderError::UnknownElement(7)));
    }

    #[test]
    fn omega_star_enumeration_descends() {
        let o = LinearOrder::omega_star();
        // compare(e3, e1) → LT: later enumerated elements sit lower.
        assert_eq!(o.compare(3, 1).unwrap(), Ordering::Less);
        assert_eq!(o.compare(0, 7).unwrap(), Ordering::Greater);
        let mut fuel = Fuel::unlimited();
        assert_eq!(o.prefix(4, &mut fuel).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn sum_blocks() {
        let a = LinearOrder::finite_range(2);
        let b = LinearOrder::finite_range(3);
        let s = LinearOrder::sum(&a, &b);
        assert_eq!(s.len_if_finite(), Some(5));
        let mut fuel = Fuel::unlimited();
        let all = s.prefix(10, &mut fuel).unwrap();
        assert_eq!(all.len(), 5);
        // Exactly two elements lie below all other elements' block.
        let mut left_count = 0;
        for &x in &all {
            let is_left = s.describe(x).starts_with("L:");
            if is_left {
                left_count += 1;
                for &y in &all {
                    if s.describe(y).starts_with("R:") {
                        assert_eq!(s.compare(x, y).unwrap(), Ordering::Less);
                    }
                }
            }
        }
        assert_eq!(left_count, 2);
        check_linear_prefix(&s, 5, &mut fuel).unwrap();
    }

    #[test]
    fn sum_of_infinites_interleaves() {
        let s = LinearOrder::sum(&LinearOrder::omega_star(), &LinearOrder::omega_star());
        let mut fuel = Fuel::unlimited();
        let pre = s.prefix(6, &mut fuel).unwrap();
        assert_eq!(pre.len(), 6);
        check_linear_prefix(&s, 6, &mut fuel).unwrap();
        assert_eq!(s.finiteness(), Finiteness::Infinite);
    }
}
