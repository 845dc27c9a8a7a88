//! Finite unions of rational intervals, kept in a canonical normal form.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

pub type Q = Ratio<i64>;

/// One end of an interval. `None` stands for the corresponding infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endpoint {
    pub value: Q,
    pub closed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Option<Endpoint>,
    pub hi: Option<Endpoint>,
}

impl Interval {
    pub fn closed(a: Q, b: Q) -> Self {
        Interval {
            lo: Some(Endpoint { value: a, closed: true }),
            hi: Some(Endpoint { value: b, closed: true }),
        }
    }

    pub fn open(a: Q, b: Q) -> Self {
        Interval {
            lo: Some(Endpoint { value: a, closed: false }),
            hi: Some(Endpoint { value: b, closed: false }),
        }
    }

    pub fn full() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn point(a: Q) -> Self {
        Interval::closed(a, a)
    }

    pub fn is_empty(&self) -> bool {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) => match l.value.cmp(&h.value) {
                Ordering::Greater => true,
                Ordering::Equal => !(l.closed && h.closed),
                Ordering::Less => false,
            },
            _ => false,
        }
    }

    pub fn contains(&self, q: Q) -> bool {
        let above = match self.lo {
            None => true,
            Some(l) => l.value < q || (l.closed && l.value == q),
        };
        let below = match self.hi {
            None => true,
            Some(h) => q < h.value || (h.closed && h.value == q),
        };
        above && below
    }
}

/// Lower bounds ordered from the left: `-inf` first, and at equal values a
/// closed bound starts earlier than an open one.
fn cmp_lo(a: Option<Endpoint>, b: Option<Endpoint>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => x.value.cmp(&y.value).then(y.closed.cmp(&x.closed)),
    }
}

/// Upper bounds ordered from the left: at equal values an open bound ends
/// earlier than a closed one; `+inf` last.
fn cmp_hi(a: Option<Endpoint>, b: Option<Endpoint>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
        (Some(x), Some(y)) => x.value.cmp(&y.value).then(x.closed.cmp(&y.closed)),
    }
}

/// Whether an interval ending at `hi` and one starting at `lo` overlap or
/// touch so that their union is a single interval.
fn joins(hi: Option<Endpoint>, lo: Option<Endpoint>) -> bool {
    match (hi, lo) {
        (None, _) | (_, None) => true,
        (Some(h), Some(l)) => l.value < h.value || (l.value == h.value && (l.closed || h.closed)),
    }
}

/// A finite union of intervals, sorted, disjoint and with touching pieces
/// merged, so structural equality is set equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalSet {
    pieces: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full() -> Self {
        IntervalSet {
            pieces: vec![Interval::full()],
        }
    }

    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut pieces: Vec<Interval> = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        pieces.sort_by(|a, b| cmp_lo(a.lo, b.lo).then(cmp_hi(a.hi, b.hi)));
        let mut out: Vec<Interval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match out.last_mut() {
                Some(last) if joins(last.hi, p.lo) => {
                    if cmp_hi(p.hi, last.hi) == Ordering::Greater {
                        last.hi = p.hi;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalSet { pieces: out }
    }

    /// True when the pieces are already in normal form.
    pub fn is_normalized_form(intervals: &[Interval]) -> bool {
        IntervalSet::from_intervals(intervals.iter().copied()).pieces == intervals
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pieces == [Interval::full()]
    }

    pub fn member(&self, q: Q) -> bool {
        self.pieces.iter().any(|p| p.contains(q))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().chain(&other.pieces).copied())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                let lo = if cmp_lo(a.lo, b.lo) == Ordering::Greater { a.lo } else { b.lo };
                let hi = if cmp_hi(a.hi, b.hi) == Ordering::Less { a.hi } else { b.hi };
                out.push(Interval { lo, hi });
            }
        }
        IntervalSet::from_intervals(out)
    }

    pub fn complement(&self) -> IntervalSet {
        let flip = |e: Endpoint| Endpoint {
            value: e.value,
            closed: !e.closed,
        };
        let mut out = Vec::new();
        // lower end of the gap currently being built; `None` is -inf
        let mut gap: Option<Option<Endpoint>> = Some(None);
        for p in &self.pieces {
            if let (Some(lo), Some(l)) = (gap, p.lo) {
                out.push(Interval { lo, hi: Some(flip(l)) });
            }
            gap = p.hi.map(|h| Some(flip(h)));
        }
        if let Some(lo) = gap {
            out.push(Interval { lo, hi: None });
        }
        IntervalSet::from_intervals(out)
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lo {
            None => write!(f, "(-inf,")?,
            Some(l) => write!(f, "{}{},", if l.closed { '[' } else { '(' }, fmt_q(&l.value))?,
        }
        match self.hi {
            None => write!(f, "+inf)"),
            Some(h) => write!(f, "{}{}", fmt_q(&h.value), if h.closed { ']' } else { ')' }),
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Renders a rational as `n` or `n/d`.
pub fn format_rational(q: &Q) -> String {
    fmt_q(q)
}

/// Parses `n`, `-n`, `n/d` or a finite decimal such as `2.5` exactly.
pub fn parse_rational(text: &str) -> Option<Q> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        return (d != 0).then(|| Q::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return None;
        }
        let negative = whole.starts_with('-');
        let w: i64 = if whole.is_empty() || whole == "-" || whole == "+" {
            0
        } else {
            whole.parse().ok()?
        };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let f: i64 = frac.parse().ok()?;
        let mag = w.checked_abs()?.checked_mul(scale)?.checked_add(f)?;
        return Some(Q::new(if negative { -mag } else { mag }, scale));
    }
    text.parse::<i64>().ok().map(Q::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn set(v: Vec<Interval>) -> IntervalSet {
        IntervalSet::from_intervals(v)
    }

    #[test]
    fn intersection_of_closed() {
        let a = set(vec![Interval::closed(q(1), q(3))]);
        let b = set(vec![Interval::closed(q(2), q(5))]);
        assert_eq!(a.intersect(&b), set(vec![Interval::closed(q(2), q(3))]));
    }

    #[test]
    fn complement_of_open_unit() {
        let a = set(vec![Interval::open(q(0), q(1))]);
        let c = a.complement();
        assert_eq!(c.to_string(), "(-inf,0] u [1,+inf)");
        assert_eq!(c.complement(), a);
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::full());
        assert_eq!(IntervalSet::full().complement(), IntervalSet::empty());
    }

    #[test]
    fn membership_is_exact() {
        let a = set(vec![Interval::closed(q(2), q(5))]);
        assert!(a.member(Q::new(5, 2)));
        assert!(a.member(q(5)));
        assert!(!a.member(Q::new(11, 2)));
        let half_open = set(vec![Interval {
            lo: Some(Endpoint { value: q(1), closed: true }),
            hi: Some(Endpoint { value: q(2), closed: false }),
        }]);
        assert!(!half_open.member(q(2)));
    }

    #[test]
    fn merging() {
        let a = set(vec![
            Interval {
                lo: Some(Endpoint { value: q(0), closed: true }),
                hi: Some(Endpoint { value: q(1), closed: false }),
            },
            Interval::closed(q(1), q(2)),
        ]);
        assert_eq!(a, set(vec![Interval::closed(q(0), q(2))]));
        let gap = set(vec![Interval::open(q(0), q(1)), Interval::open(q(1), q(2))]);
        assert_eq!(gap.pieces().len(), 2);
        assert!(!gap.member(q(1)));
        assert!(set(vec![Interval::open(q(1), q(1))]).is_empty());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("5/2"), Some(Q::new(5, 2)));
        assert_eq!(parse_rational("2.5"), Some(Q::new(5, 2)));
        assert_eq!(parse_rational("-0.25"), Some(Q::new(-1, 4)));
        assert_eq!(parse_rational("4/0"), None);
        assert_eq!(format_rational(&Q::new(10, 4)), "5/2");
    }
}
