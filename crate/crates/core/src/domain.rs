//! Integer domains with possibly infinite endpoints and the interval
//! arithmetic used by the propagators.

use std::cmp::Ordering;
use std::fmt;

/// Intervals narrower than this may be materialized into explicit finite
/// sets when a propagator needs to punch a hole into them.
pub const SMALL_SET_LIMIT: i64 = 64;

/// A domain endpoint: finite or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Fin(i64),
    PosInf,
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        use Bound::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl Bound {
    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Fin(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Fin(v) => Some(v),
            _ => None,
        }
    }

    /// Saturating addition. Widening a finite overflow to an infinity only
    /// ever loosens a bound, which keeps interval hulls sound.
    pub fn add(self, other: Bound) -> Bound {
        use Bound::*;
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => {
                // callers never combine opposite infinities for a hull bound
                unreachable!("opposite infinities in bound addition")
            }
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Fin(a), Fin(b)) => clamp128(a as i128 + b as i128),
        }
    }

    pub fn sub(self, other: Bound) -> Bound {
        self.add(other.neg())
    }

    pub fn neg(self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Fin(v) => clamp128(-(v as i128)),
        }
    }

    /// Bound product; an infinity times a zero-width factor is zero.
    pub fn mul(self, other: Bound) -> Bound {
        use Bound::*;
        match (self, other) {
            (Fin(a), Fin(b)) => clamp128(a as i128 * b as i128),
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (a, b) => {
                let neg = a < Fin(0);
                let negb = b < Fin(0);
                if neg == negb {
                    PosInf
                } else {
                    NegInf
                }
            }
        }
    }

    pub fn offset(self, c: i64) -> Bound {
        self.add(Bound::Fin(c))
    }
}

fn clamp128(v: i128) -> Bound {
    if v > i64::MAX as i128 {
        Bound::PosInf
    } else if v < i64::MIN as i128 {
        Bound::NegInf
    } else {
        Bound::Fin(v as i64)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "+inf"),
            Bound::Fin(v) => write!(f, "{v}"),
        }
    }
}

/// An integer domain: an interval with possibly infinite endpoints, an
/// explicit finite set, or the empty domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    Empty,
    Interval(Bound, Bound),
    Finite(Vec<i64>),
}

impl Domain {
    /// Unconstrained domain.
    pub fn full() -> Domain {
        Domain::Interval(Bound::NegInf, Bound::PosInf)
    }

    pub fn singleton(v: i64) -> Domain {
        Domain::Finite(vec![v])
    }

    /// Builds an interval domain, canonicalizing degenerate cases:
    /// empty ranges collapse to `Empty`, single points to a singleton set.
    /// An interval bounded below by `+inf` (or above by `-inf`) contains no
    /// integer and is `Empty` even though its endpoints compare equal.
    pub fn interval(lo: Bound, hi: Bound) -> Domain {
        if lo > hi || lo == Bound::PosInf || hi == Bound::NegInf {
            return Domain::Empty;
        }
        if let (Bound::Fin(a), Bound::Fin(b)) = (lo, hi) {
            if a == b {
                return Domain::singleton(a);
            }
        }
        Domain::Interval(lo, hi)
    }

    /// Builds a finite-set domain from arbitrary values (sorted, deduped).
    pub fn finite_set(mut values: Vec<i64>) -> Domain {
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            Domain::Empty
        } else {
            Domain::Finite(values)
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Domain::Empty)
    }

    pub fn lo(&self) -> Bound {
        match self {
            Domain::Empty => Bound::PosInf,
            Domain::Interval(lo, _) => *lo,
            Domain::Finite(vs) => Bound::Fin(vs[0]),
        }
    }

    pub fn hi(&self) -> Bound {
        match self {
            Domain::Empty => Bound::NegInf,
            Domain::Interval(_, hi) => *hi,
            Domain::Finite(vs) => Bound::Fin(*vs.last().unwrap()),
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match self {
            Domain::Empty => false,
            Domain::Interval(lo, hi) => *lo <= Bound::Fin(v) && Bound::Fin(v) <= *hi,
            Domain::Finite(vs) => vs.binary_search(&v).is_ok(),
        }
    }

    /// Finiteness and cardinality: infinite iff either endpoint is infinite.
    pub fn finiteness(&self) -> (bool, Option<u128>) {
        match self {
            Domain::Empty => (true, Some(0)),
            Domain::Finite(vs) => (true, Some(vs.len() as u128)),
            Domain::Interval(Bound::Fin(a), Bound::Fin(b)) => {
                (true, Some((*b as i128 - *a as i128) as u128 + 1))
            }
            Domain::Interval(_, _) => (false, None),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finiteness().0
    }

    /// The single value of a singleton domain, if any.
    pub fn fixed(&self) -> Option<i64> {
        match self {
            Domain::Finite(vs) if vs.len() == 1 => Some(vs[0]),
            _ => None,
        }
    }

    /// Exact set intersection.
    pub fn intersect(&self, other: &Domain) -> Domain {
        use Domain::*;
        match (self, other) {
            (Empty, _) | (_, Empty) => Empty,
            (Interval(lo1, hi1), Interval(lo2, hi2)) => {
                Domain::interval((*lo1).max(*lo2), (*hi1).min(*hi2))
            }
            (Finite(vs), other) | (other, Finite(vs)) => {
                Domain::finite_set(vs.iter().copied().filter(|v| other.contains(*v)).collect())
            }
        }
    }

    /// Narrows to values `>= lo`.
    pub fn narrow_lo(&self, lo: Bound) -> Domain {
        match self {
            Domain::Empty => Domain::Empty,
            Domain::Interval(l, h) => Domain::interval((*l).max(lo), *h),
            Domain::Finite(vs) => {
                Domain::finite_set(vs.iter().copied().filter(|v| Bound::Fin(*v) >= lo).collect())
            }
        }
    }

    /// Narrows to values `<= hi`.
    pub fn narrow_hi(&self, hi: Bound) -> Domain {
        match self {
            Domain::Empty => Domain::Empty,
            Domain::Interval(l, h) => Domain::interval(*l, (*h).min(hi)),
            Domain::Finite(vs) => {
                Domain::finite_set(vs.iter().copied().filter(|v| Bound::Fin(*v) <= hi).collect())
            }
        }
    }

    /// Removes one value. Interval interiors are only punched open when the
    /// interval is small enough to materialize as a finite set.
    pub fn remove(&self, v: i64) -> Domain {
        match self {
            Domain::Empty => Domain::Empty,
            Domain::Finite(vs) => {
                Domain::finite_set(vs.iter().copied().filter(|x| *x != v).collect())
            }
            Domain::Interval(lo, hi) => {
                if !self.contains(v) {
                    return self.clone();
                }
                if *lo == Bound::Fin(v) {
                    return Domain::interval(Bound::Fin(v).offset(1), *hi);
                }
                if *hi == Bound::Fin(v) {
                    return Domain::interval(*lo, Bound::Fin(v).offset(-1));
                }
                if let (Bound::Fin(a), Bound::Fin(b)) = (*lo, *hi) {
                    if b as i128 - a as i128 <= SMALL_SET_LIMIT as i128 {
                        return Domain::finite_set((a..=b).filter(|x| *x != v).collect());
                    }
                }
                self.clone() // hole not representable; sound to keep
            }
        }
    }

    /// Iterates a finite domain in ascending order.
    pub fn iter_ascending(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        match self {
            Domain::Empty => Box::new(std::iter::empty()),
            Domain::Finite(vs) => Box::new(vs.iter().copied()),
            Domain::Interval(Bound::Fin(a), Bound::Fin(b)) => Box::new(*a..=*b),
            Domain::Interval(_, _) => panic!("iter_ascending on infinite domain"),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Empty => write!(f, "{{}}"),
            Domain::Interval(lo, hi) => write!(f, "[{lo},{hi}]"),
            Domain::Finite(vs) => {
                write!(f, "{{")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// Arithmetic operator for interval hulls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Smallest interval containing `{a op b | a in d1, b in d2}`.
pub fn interval_arith(op: ArithOp, d1: &Domain, d2: &Domain) -> Domain {
    if d1.is_empty() || d2.is_empty() {
        return Domain::Empty;
    }
    let (lo1, hi1) = (ext(d1.lo()), ext(d1.hi()));
    let (lo2, hi2) = (ext(d2.lo()), ext(d2.hi()));
    match op {
        ArithOp::Add => Domain::interval(
            lo_bound(ext_add(lo1, lo2)),
            hi_bound(ext_add(hi1, hi2)),
        ),
        ArithOp::Sub => Domain::interval(
            lo_bound(ext_add(lo1, ext_neg(hi2))),
            hi_bound(ext_add(hi1, ext_neg(lo2))),
        ),
        ArithOp::Mul => {
            let corners = [
                ext_mul(lo1, lo2),
                ext_mul(lo1, hi2),
                ext_mul(hi1, lo2),
                ext_mul(hi1, hi2),
            ];
            let lo = corners.iter().copied().min().unwrap();
            let hi = corners.iter().copied().max().unwrap();
            Domain::interval(lo_bound(lo), hi_bound(hi))
        }
    }
}

/// Extended bound for exact hull arithmetic: class −1/0/+1 for −inf,
/// finite, +inf; the i128 payload never overflows for i64 sums/products.
/// Tuple ordering is the numeric order.
type Ext = (i8, i128);

fn ext(b: Bound) -> Ext {
    match b {
        Bound::NegInf => (-1, 0),
        Bound::Fin(v) => (0, v as i128),
        Bound::PosInf => (1, 0),
    }
}

fn ext_neg(a: Ext) -> Ext {
    (-a.0, -a.1)
}

fn ext_add(a: Ext, b: Ext) -> Ext {
    match (a.0, b.0) {
        (0, 0) => (0, a.1 + b.1),
        (-1, 1) | (1, -1) => unreachable!("opposite infinities in bound addition"),
        (c, 0) | (0, c) | (c, _) => (c, 0),
    }
}

fn ext_mul(a: Ext, b: Ext) -> Ext {
    if a == (0, 0) || b == (0, 0) {
        return (0, 0);
    }
    if a.0 == 0 && b.0 == 0 {
        return (0, a.1 * b.1);
    }
    let sign = |x: Ext| -> i8 {
        if x.0 != 0 {
            x.0
        } else if x.1 > 0 {
            1
        } else {
            -1
        }
    };
    (sign(a) * sign(b), 0)
}

/// Converts an exact lower bound, saturating overflow to `Fin(i64::MAX)`:
/// weaker than the true bound, hence sound, and still enumerable.
fn lo_bound(e: Ext) -> Bound {
    match e {
        (-1, _) => Bound::NegInf,
        (1, _) => Bound::PosInf, // no integer lies above +inf: Empty
        (_, v) if v > i64::MAX as i128 => Bound::Fin(i64::MAX),
        (_, v) if v < i64::MIN as i128 => Bound::NegInf,
        (_, v) => Bound::Fin(v as i64),
    }
}

/// Converts an exact upper bound, saturating overflow to `+inf`.
fn hi_bound(e: Ext) -> Bound {
    match e {
        (1, _) => Bound::PosInf,
        (-1, _) => Bound::NegInf, // no integer lies below -inf: Empty
        (_, v) if v > i64::MAX as i128 => Bound::PosInf,
        (_, v) if v < i64::MIN as i128 => Bound::Fin(i64::MIN),
        (_, v) => Bound::Fin(v as i64),
    }
}

/// Exact integer square root of a nonnegative value.
pub fn isqrt(k: i64) -> i64 {
    debug_assert!(k >= 0);
    if k < 2 {
        return k;
    }
    let mut x = (k as f64).sqrt() as i64 + 1;
    loop {
        let y = (x + k / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x as i128 * x as i128 > k as i128 {
        x -= 1;
    }
    while (x + 1) as i128 * (x + 1) as i128 <= k as i128 {
        x += 1;
    }
    x
}

/// Solutions of `r*r = k` over the integers, as an explicit set.
pub fn perfect_square_roots(k: i64) -> Option<Domain> {
    if k < 0 {
        return None;
    }
    let r = isqrt(k);
    if r as i128 * r as i128 != k as i128 {
        return None;
    }
    if r == 0 {
        Some(Domain::singleton(0))
    } else {
        Some(Domain::finite_set(vec![-r, r]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fin(v: i64) -> Bound {
        Bound::Fin(v)
    }

    #[test]
    fn bound_total_order() {
        assert!(Bound::NegInf < fin(i64::MIN));
        assert!(fin(i64::MAX) < Bound::PosInf);
        assert!(fin(-3) < fin(4));
    }

    #[test]
    fn intersect_examples() {
        let d = Domain::interval(fin(0), Bound::PosInf)
            .intersect(&Domain::interval(Bound::NegInf, fin(5)));
        assert_eq!(d, Domain::Interval(fin(0), fin(5)));

        let d = Domain::finite_set(vec![-100, 100]).intersect(&Domain::interval(fin(0), Bound::PosInf));
        assert_eq!(d, Domain::singleton(100));

        let d = Domain::interval(fin(1), fin(3)).intersect(&Domain::singleton(5));
        assert_eq!(d, Domain::Empty);
    }

    #[test]
    fn finiteness_examples() {
        assert_eq!(Domain::interval(fin(-10), fin(10)).finiteness(), (true, Some(21)));
        assert_eq!(Domain::interval(fin(10001), Bound::PosInf).finiteness(), (false, None));
        assert_eq!(Domain::finite_set(vec![-100, 100]).finiteness(), (true, Some(2)));
    }

    #[test]
    fn interval_arith_examples() {
        let d = interval_arith(
            ArithOp::Add,
            &Domain::interval(fin(1), fin(2)),
            &Domain::interval(fin(10), fin(20)),
        );
        assert_eq!(d, Domain::Interval(fin(11), fin(22)));

        let d = interval_arith(
            ArithOp::Mul,
            &Domain::interval(fin(-2), fin(3)),
            &Domain::interval(fin(0), Bound::PosInf),
        );
        assert_eq!(d, Domain::Interval(Bound::NegInf, Bound::PosInf));

        let d = interval_arith(
            ArithOp::Mul,
            &Domain::interval(fin(10001), Bound::PosInf),
            &Domain::interval(fin(10001), Bound::PosInf),
        );
        assert_eq!(d, Domain::Interval(fin(100_020_001), Bound::PosInf));
    }

    #[test]
    fn square_root_examples() {
        assert_eq!(perfect_square_roots(10000), Some(Domain::finite_set(vec![-100, 100])));
        assert_eq!(perfect_square_roots(10001), None);
        assert_eq!(perfect_square_roots(0), Some(Domain::singleton(0)));
        assert_eq!(perfect_square_roots(-4), None);
    }

    #[test]
    fn square_roots_vs_brute_force() {
        for k in 0..=1_000_000i64 {
            if k % 997 != 0 && k > 2000 {
                continue; // sample the large range
            }
            let expected = (0..=isqrt(k) + 1).find(|r| r * r == k);
            let got = perfect_square_roots(k);
            match expected {
                Some(0) => assert_eq!(got, Some(Domain::singleton(0)), "k={k}"),
                Some(r) => assert_eq!(got, Some(Domain::finite_set(vec![-r, r])), "k={k}"),
                None => assert_eq!(got, None, "k={k}"),
            }
        }
    }

    fn arb_small_domain() -> impl Strategy<Value = Domain> {
        prop_oneof![
            (-50i64..=50, 0i64..=20).prop_map(|(a, w)| Domain::interval(fin(a), fin(a + w))),
            proptest::collection::vec(-50i64..=50, 1..6).prop_map(Domain::finite_set),
        ]
    }

    proptest! {
        #[test]
        fn intersect_commutative_idempotent(d1 in arb_small_domain(), d2 in arb_small_domain()) {
            let a = d1.intersect(&d2);
            let b = d2.intersect(&d1);
            // same value set either way
            for v in -60..=60i64 {
                prop_assert_eq!(a.contains(v), b.contains(v));
                prop_assert_eq!(a.contains(v), d1.contains(v) && d2.contains(v));
            }
            let c = d1.intersect(&d1);
            for v in -60..=60i64 {
                prop_assert_eq!(c.contains(v), d1.contains(v));
            }
        }

        #[test]
        fn interval_arith_sound(d1 in arb_small_domain(), d2 in arb_small_domain(),
                                opi in 0usize..3) {
            let op = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul][opi];
            let hull = interval_arith(op, &d1, &d2);
            for a in -50..=70i64 {
                if !d1.contains(a) { continue; }
                for b in -50..=70i64 {
                    if !d2.contains(b) { continue; }
                    let r = match op {
                        ArithOp::Add => a + b,
                        ArithOp::Sub => a - b,
                        ArithOp::Mul => a * b,
                    };
                    prop_assert!(hull.lo() <= fin(r) && fin(r) <= hull.hi(),
                        "{a} op {b} = {r} outside {hull}");
                }
            }
        }
    }
}
