//! Ordinal notations in Cantor normal form below ε₀.
//!
//! A notation is a finite sum `w^e1*c1 + … + w^ek*ck` with exponents strictly
//! decreasing and coefficients positive; zero is the empty sum. Comparison,
//! addition, multiplication by a natural, and base-ω exponentiation are all
//! structural. Notations double as linear orders (the order of all notations
//! strictly below a given one) via [`OrdinalNotation::order`].

use std::cmp::Ordering;
use std::fmt;

use crate::fuel::{Fuel, MemoStream, Stall};
use crate::linord::order::{Code, Finiteness, LinearOrder, OrderError, OrderKernel};

/// An ordinal below ε₀ in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrdinalNotation {
    /// `(exponent, coefficient)` pairs, exponents strictly decreasing.
    terms: Vec<(OrdinalNotation, u64)>,
}

impl fmt::Debug for OrdinalNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl OrdinalNotation {
    pub fn zero() -> Self {
        OrdinalNotation { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalNotation { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        OrdinalNotation { terms: vec![(Self::nat(1), 1)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 if self.terms[0].0.is_zero() => Some(self.terms[0].1),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(OrdinalNotation, u64)] {
        &self.terms
    }

    /// Builds a notation from raw terms, validating the CNF invariants.
    pub fn from_terms(terms: Vec<(OrdinalNotation, u64)>) -> Result<Self, CnfError> {
        for w in terms.windows(2) {
            if w[0].0.cmp(&w[1].0) != Ordering::Greater {
                return Err(CnfError::ExponentsNotDecreasing);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(CnfError::ZeroCoefficient);
        }
        Ok(OrdinalNotation { terms })
    }

    /// `self + other` with the usual left-absorption.
    pub fn add(&self, other: &OrdinalNotation) -> OrdinalNotation {
        if other.is_zero() {
            return self.clone();
        }
        let lead = &other.terms[0].0;
        let mut terms: Vec<(OrdinalNotation, u64)> = Vec::new();
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                _ => break,
            }
        }
        let mut rest = other.terms.clone();
        if let Some((e, c)) = self.terms.iter().find(|(e, _)| e.cmp(lead) == Ordering::Equal) {
            debug_assert!(e.cmp(lead) == Ordering::Equal);
            rest[0].1 += c;
        }
        terms.extend(rest);
        OrdinalNotation { terms }
    }

    /// `self · k` for a natural `k`.
    pub fn mul_nat(&self, k: u64) -> OrdinalNotation {
        if k == 0 || self.is_zero() {
            return Self::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].1 *= k;
        OrdinalNotation { terms }
    }

    /// `ω^self`.
    pub fn omega_pow(&self) -> OrdinalNotation {
        OrdinalNotation { terms: vec![(self.clone(), 1)] }
    }

    /// Symbol weight used for canonical enumeration: `weight(0) = 0`,
    /// `weight(Σ w^e·c) = Σ (1 + weight(e) + (c-1))`.
    pub fn weight(&self) -> u64 {
        self.terms.iter().map(|(e, c)| 1 + e.weight() + (c - 1)).sum()
    }

    /// Every notation of weight at most `w`, sorted ascending.
    pub fn enumerate_up_to_weight(w: u64) -> Vec<OrdinalNotation> {
        let mut out = gen_bounded(None, w);
        out.sort();
        out
    }

    /// The linear order of all notations strictly below `self`, enumerated by
    /// ascending weight and value. Codes are enumeration positions.
    pub fn order(&self) -> LinearOrder {
        LinearOrder::new(CnfOrder::new(self.clone()))
    }

    pub fn parse(input: &str) -> Result<OrdinalNotation, CnfError> {
        Parser { chars: input.as_bytes(), pos: 0 }.parse_full()
    }
}

fn gen_bounded(max_exp: Option<&OrdinalNotation>, w: u64) -> Vec<OrdinalNotation> {
    let mut out = vec![OrdinalNotation::zero()];
    if w == 0 {
        return out;
    }
    // Candidate leading exponents: anything of weight ≤ w-1 below the bound.
    let exps = gen_bounded(None, w - 1);
    for e in exps {
        if let Some(bound) = max_exp {
            if e.cmp(bound) != Ordering::Less {
                continue;
            }
        }
        let ew = e.weight();
        let max_c = w - ew; // coefficient c costs 1 + ew + (c-1) ≤ w
        for c in 1..=max_c {
            let head_weight = 1 + ew + (c - 1);
            for tail in gen_bounded(Some(&e), w - head_weight) {
                let mut terms = vec![(e.clone(), c)];
                terms.extend(tail.terms.iter().cloned());
                out.push(OrdinalNotation { terms });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

impl PartialOrd for OrdinalNotation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalNotation {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.terms.len().min(other.terms.len());
        for i in 0..n {
            let (e1, c1) = &self.terms[i];
            let (e2, c2) = &other.terms[i];
            match e1.cmp(e2) {
                Ordering::Equal => {}
                o => return o,
            }
            match c1.cmp(c2) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for OrdinalNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                if e.as_nat() == Some(1) {
                    write!(f, "w")?;
                } else {
                    let es = e.to_string();
                    if es.contains('+') || es.contains('*') {
                        write!(f, "w^({es})")?;
                    } else {
                        write!(f, "w^{es}")?;
                    }
                }
                if *c > 1 {
                    write!(f, "*{c}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("unexpected character {0:?} in ordinal expression")]
    UnexpectedChar(char),
    #[error("unexpected end of ordinal expression")]
    UnexpectedEnd,
    #[error("trailing input after ordinal expression at offset {0}")]
    Trailing(usize),
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("exponents must strictly decrease")]
    ExponentsNotDecreasing,
    #[error("number literal too large")]
    Overflow,
}

struct Parser<'a> {
    chars: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn parse_full(&mut self) -> Result<OrdinalNotation, CnfError> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(CnfError::Trailing(self.pos));
        }
        Ok(v)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<OrdinalNotation, CnfError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<OrdinalNotation, CnfError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let k = self.number()?;
            acc = acc.mul_nat(k);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<OrdinalNotation, CnfError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.factor()?;
                    Ok(e.omega_pow())
                } else {
                    Ok(OrdinalNotation::omega())
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.peek().map_or(CnfError::UnexpectedEnd, |c| {
                        CnfError::UnexpectedChar(c as char)
                    }));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(OrdinalNotation::nat(self.number()?)),
            Some(c) => Err(CnfError::UnexpectedChar(c as char)),
            None => Err(CnfError::UnexpectedEnd),
        }
    }

    fn number(&mut self) -> Result<u64, CnfError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self
                .chars
                .get(self.pos)
                .map_or(CnfError::UnexpectedEnd, |&c| CnfError::UnexpectedChar(c as char)));
        }
        std::str::from_utf8(&self.chars[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| CnfError::Overflow)
    }
}

/// The order of notations strictly below a bound, enumerated by ascending
/// weight (within a weight, by value).
pub struct CnfOrder {
    bound: OrdinalNotation,
    memo: MemoStream<OrdinalNotation>,
}

impl CnfOrder {
    pub fn new(bound: OrdinalNotation) -> Self {
        let b = bound.clone();
        let finite_cut = bound.as_nat();
        let mut weight = 0u64;
        let mut bucket: Vec<OrdinalNotation> = Vec::new();
        let mut bucket_pos = 0usize;
        let memo = MemoStream::new(move |fuel: &mut Fuel| loop {
            fuel.consume(1)?;
            if bucket_pos < bucket.len() {
                bucket_pos += 1;
                return Ok(Some(bucket[bucket_pos - 1].clone()));
            }
            if let Some(n) = finite_cut {
                if weight >= n {
                    return Ok(None);
                }
            }
            // Next weight bucket: notations of exactly this weight below the bound.
            let all = gen_bounded(None, weight);
            bucket = all
                .into_iter()
                .filter(|x| x.weight() == weight && x.cmp(&b) == Ordering::Less)
                .collect();
            bucket.sort();
            bucket_pos = 0;
            weight += 1;
        });
        CnfOrder { bound, memo }
    }

    pub fn bound(&self) -> &OrdinalNotation {
        &self.bound
    }

    /// The notation at a given code.
    pub fn notation_at(&self, code: Code, fuel: &mut Fuel) -> Result<Option<OrdinalNotation>, Stall> {
        self.memo.get(code as usize, fuel)
    }

    /// The code of a notation below the bound, scanning the enumeration.
    pub fn code_of(&self, v: &OrdinalNotation, fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        if v.cmp(&self.bound) != Ordering::Less {
            return Ok(None);
        }
        Ok(self.memo.position(|x| x == v, fuel)?.map(|i| i as Code))
    }
}

impl OrderKernel for CnfOrder {
    fn nth(&self, i: usize, fuel: &mut Fuel) -> Result<Option<Code>, Stall> {
        Ok(self.memo.get(i, fuel)?.map(|_| i as Code))
    }

    fn contains(&self, code: Code, fuel: &mut Fuel) -> Result<bool, Stall> {
        Ok(self.memo.get(code as usize, fuel)?.is_some())
    }

    fn compare(&self, x: Code, y: Code) -> Result<Ordering, OrderError> {
        let mut fuel = Fuel::new(crate::fuel::DEFAULT_FUEL);
        let vx = self
            .memo
            .get(x as usize, &mut fuel)
            .map_err(|_| OrderError::Budget(x))?
            .ok_or(OrderError::UnknownElement(x))?;
        let vy = self
            .memo
            .get(y as usize, &mut fuel)
            .map_err(|_| OrderError::Budget(y))?
            .ok_or(OrderError::UnknownElement(y))?;
        Ok(vx.cmp(&vy))
    }

    fn finiteness(&self) -> Finiteness {
        match self.bound.as_nat() {
            Some(n) => Finiteness::Finite(n as usize),
            None => Finiteness::Infinite,
        }
    }

    fn order_type(&self) -> Option<String> {
        Some(self.bound.to_string())
    }

    fn describe(&self, code: Code) -> String {
        let mut fuel = Fuel::new(crate::fuel::DEFAULT_FUEL);
        match self.memo.get(code as usize, &mut fuel) {
            Ok(Some(v)) => v.to_string(),
            _ => format!("#{code}"),
        }
    }

    fn expression(&self) -> Option<String> {
        Some(format!("cnf:{}", self.bound))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> OrdinalNotation {
        OrdinalNotation::parse(s).unwrap()
    }

    #[test]
    fn addition_absorbs_left() {
        assert_eq!(n("w").add(&n("1")), n("w+1"));
        assert_eq!(n("1").add(&n("w")), n("w"));
        assert_eq!(n("w*2+3").add(&n("w")), n("w*3"));
    }

    #[test]
    fn omega_power_of_zero_is_one() {
        assert_eq!(OrdinalNotation::zero().omega_pow(), n("1"));
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(n("w^w").cmp(&n("w*3+5")), Ordering::Greater);
        assert_eq!(n("w+1").cmp(&n("w")), Ordering::Greater);
        assert_eq!(n("w").cmp(&n("w")), Ordering::Equal);
        assert_eq!(n("5").cmp(&n("w")), Ordering::Less);
        assert_eq!(n("w^w^w").cmp(&n("w^w*9+w")), Ordering::Greater);
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "1", "w", "w+1", "w*2+3", "w^w", "w^(w+1)*2+w*3+5", "w^w^w"] {
            let v = n(s);
            assert_eq!(OrdinalNotation::parse(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn weights() {
        assert_eq!(n("0").weight(), 0);
        assert_eq!(n("3").weight(), 3);
        assert_eq!(n("w").weight(), 2);
        assert_eq!(n("w^w").weight(), 3);
        assert_eq!(n("w^w^w").weight(), 4);
    }

    #[test]
    fn finite_cnf_order() {
        let o = n("3").order();
        assert_eq!(o.finiteness(), Finiteness::Finite(3));
        let mut fuel = Fuel::unlimited();
        let pre = o.prefix(10, &mut fuel).unwrap();
        assert_eq!(pre.len(), 3);
        assert_eq!(o.compare(0, 2).unwrap(), Ordering::Less);
    }

    #[test]
    fn omega_plus_one_order_reaches_omega() {
        let o = n("w+1").order();
        let mut fuel = Fuel::unlimited();
        let pre = o.prefix(6, &mut fuel).unwrap();
        let shown: Vec<String> = pre.iter().map(|&c| o.describe(c)).collect();
        assert!(shown.contains(&"w".to_string()), "ω must appear early: {shown:?}");
        crate::linord::order::check_linear_prefix(&o, 6, &mut fuel).unwrap();
    }

    #[test]
    fn enumerate_small() {
        let xs = OrdinalNotation::enumerate_up_to_weight(3);
        assert!(xs.contains(&n("0")));
        assert!(xs.contains(&n("w")));
        assert!(xs.contains(&n("w^w")));
        assert!(xs.contains(&n("w+1")));
        assert!(xs.contains(&n("w*2")));
        assert!(!xs.contains(&n("w^w^w")));
        for w in xs.windows(2) {
            assert_eq!(w[0].cmp(&w[1]), Ordering::Less);
        }
    }
}
