//! The ring of eventually quasi-polynomial functions.
//!
//! An [`EventualQP`] is a function `Z -> Z` that, for all `n` past an
//! explicit threshold, agrees with one of `T` rational-coefficient
//! polynomials selected by `n mod T`. Constituents are stored as
//! polynomials in `n` itself; the shifted form `g_i(m)` with `n = Tm + i`
//! (which always has integer coefficients after a suitable period
//! refinement) is available for display and for the division machinery.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyring::{eventual_sign_q, int_from_q, IntPoly, QPoly, RatFunc, Sign};

/// Eventually quasi-polynomial function: period `T`, one constituent per
/// residue class, and a threshold `N0` past which the closed form is
/// certified.
#[derive(Clone, PartialEq, Eq)]
pub struct EventualQP {
    period: u64,
    constituents: Vec<QPoly>,
    threshold: BigInt,
}

impl EventualQP {
    /// Checked constructor: validates shape and integer-valuedness on each
    /// residue class, then canonicalizes to the minimal period.
    pub fn new(period: u64, constituents: Vec<QPoly>, threshold: BigInt) -> Result<EventualQP> {
        if period == 0 || constituents.len() != period as usize {
            return Err(Error::Domain(format!(
                "period {period} does not match {} constituents",
                constituents.len()
            )));
        }
        let eqp = EventualQP {
            period,
            constituents,
            threshold,
        };
        eqp.check_integer_valued()?;
        Ok(eqp.canonicalize())
    }

    fn check_integer_valued(&self) -> Result<()> {
        for (i, q) in self.constituents.iter().enumerate() {
            let deg = q.degree().unwrap_or(0);
            let t = self.period as i64;
            // First sample point n >= threshold with n = i (mod T).
            let start = {
                let i = BigInt::from(i as u64);
                let diff = &self.threshold - &i;
                let k0 = if diff.is_positive() {
                    diff.div_ceil(&BigInt::from(t))
                } else {
                    BigInt::zero()
                };
                i + k0 * t
            };
            for k in 0..=deg as i64 {
                let n = &start + BigInt::from(k * t);
                if !q.eval_int(&n).is_integer() {
                    return Err(Error::Domain(format!(
                        "constituent for class {i} is not integer-valued at n = {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_poly(p: &IntPoly) -> EventualQP {
        EventualQP {
            period: 1,
            constituents: vec![p.to_q()],
            threshold: BigInt::zero(),
        }
    }

    pub fn from_int(c: i64) -> EventualQP {
        EventualQP::from_poly(&IntPoly::constant_i64(c))
    }

    pub fn from_bigint(c: &BigInt) -> EventualQP {
        EventualQP::from_poly(&IntPoly::constant(c.clone()))
    }

    pub fn zero() -> EventualQP {
        EventualQP::from_poly(&IntPoly::zero())
    }

    pub fn one() -> EventualQP {
        EventualQP::from_int(1)
    }

    /// Indicator of `n = r (mod d)`.
    pub fn residue_indicator(d: u64, r: u64) -> Result<EventualQP> {
        if d == 0 || r >= d {
            return Err(Error::Domain(format!(
                "residue {r} out of range for modulus {d}"
            )));
        }
        let mut constituents = vec![QPoly::zero(); d as usize];
        constituents[r as usize] = QPoly::one();
        Ok(EventualQP {
            period: d,
            constituents,
            threshold: BigInt::zero(),
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn threshold(&self) -> &BigInt {
        &self.threshold
    }

    pub fn constituent(&self, class: u64) -> &QPoly {
        &self.constituents[(class % self.period) as usize]
    }

    pub fn constituents(&self) -> &[QPoly] {
        &self.constituents
    }

    pub fn with_threshold(mut self, threshold: BigInt) -> EventualQP {
        self.threshold = threshold;
        self
    }

    pub fn max_threshold(mut self, other: &BigInt) -> EventualQP {
        if *other > self.threshold {
            self.threshold = other.clone();
        }
        self
    }

    /// Applies the constituent formula at `n` (meaningful for
    /// `n >= threshold`; callers below the threshold get the eventual
    /// extension).
    pub fn evaluate(&self, n: &BigInt) -> BigInt {
        let class = n.mod_floor(&BigInt::from(self.period)).to_u64().unwrap();
        let v = self.constituent(class).eval_int(n);
        debug_assert!(v.is_integer(), "non-integer value at n = {n}");
        v.to_integer()
    }

    pub fn evaluate_i64(&self, n: i64) -> BigInt {
        self.evaluate(&BigInt::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.constituents.iter().all(|q| q.is_zero())
    }

    /// Same function re-expressed with period `multiple`.
    pub fn refine(&self, multiple: u64) -> Result<EventualQP> {
        if multiple == 0 || multiple % self.period != 0 {
            return Err(Error::Domain(format!(
                "{multiple} is not a multiple of the period {}",
                self.period
            )));
        }
        let constituents = (0..multiple)
            .map(|c| self.constituent(c % self.period).clone())
            .collect();
        Ok(EventualQP {
            period: multiple,
            constituents,
            threshold: self.threshold.clone(),
        })
    }

    /// Minimal-period form; ties broken toward the smallest period.
    pub fn canonicalize(&self) -> EventualQP {
        for t in 1..=self.period {
            if self.period % t != 0 {
                continue;
            }
            let collapses = (0..self.period)
                .all(|c| self.constituents[c as usize] == self.constituents[(c % t) as usize]);
            if collapses {
                return EventualQP {
                    period: t,
                    constituents: self.constituents[..t as usize].to_vec(),
                    threshold: self.threshold.clone(),
                };
            }
        }
        self.clone()
    }

    /// Equality as eventual functions (thresholds ignored).
    pub fn eq_eventually(&self, other: &EventualQP) -> bool {
        let a = self.canonicalize();
        let b = other.canonicalize();
        a.period == b.period && a.constituents == b.constituents
    }

    fn pointwise(&self, other: &EventualQP, op: impl Fn(&QPoly, &QPoly) -> QPoly) -> EventualQP {
        let t = self.period.lcm(&other.period);
        let constituents = (0..t)
            .map(|c| op(self.constituent(c % self.period), other.constituent(c % other.period)))
            .collect();
        EventualQP {
            period: t,
            constituents,
            threshold: self.threshold.clone().max(other.threshold.clone()),
        }
        .canonicalize()
    }

    pub fn add(&self, other: &EventualQP) -> EventualQP {
        self.pointwise(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &EventualQP) -> EventualQP {
        self.pointwise(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &EventualQP) -> EventualQP {
        self.pointwise(other, |a, b| a * b)
    }

    pub fn neg(&self) -> EventualQP {
        EventualQP {
            period: self.period,
            constituents: self.constituents.iter().map(|q| -q).collect(),
            threshold: self.threshold.clone(),
        }
    }

    pub fn mul_poly(&self, p: &IntPoly) -> EventualQP {
        self.mul(&EventualQP::from_poly(p))
    }

    /// Pointwise absolute value: negates the classes whose constituent is
    /// eventually negative.
    pub fn abs(&self) -> EventualQP {
        let mut threshold = self.threshold.clone();
        let constituents = self
            .constituents
            .iter()
            .map(|q| {
                let (s, t) = eventual_sign_q(q);
                if t > threshold {
                    threshold = t.clone();
                }
                if s == Sign::Negative {
                    -q
                } else {
                    q.clone()
                }
            })
            .collect();
        EventualQP {
            period: self.period,
            constituents,
            threshold,
        }
        .canonicalize()
    }

    /// Sign of each class for large `n`; `None` if classes disagree.
    pub fn eventual_sign_uniform(&self) -> (Vec<Sign>, BigInt) {
        let mut threshold = self.threshold.clone();
        let signs = self
            .constituents
            .iter()
            .map(|q| {
                let (s, t) = eventual_sign_q(q);
                if t > threshold {
                    threshold = t;
                }
                s
            })
            .collect();
        (signs, threshold)
    }

    /// True when every constituent is eventually positive (resp. zero
    /// counts as failure).
    pub fn is_eventually_positive(&self) -> bool {
        self.constituents
            .iter()
            .all(|q| eventual_sign_q(q).0 == Sign::Positive)
    }

    /// Constituent for class `i` rewritten in the shifted variable `m`
    /// where `n = T*m + i`; coefficients may be rational.
    pub fn shifted(&self, class: u64) -> QPoly {
        let t = BigRational::from_integer(BigInt::from(self.period));
        let i = BigRational::from_integer(BigInt::from(class % self.period));
        self.constituent(class).compose_affine(&t, &i)
    }

    /// Refines to a period where every shifted constituent has integer
    /// coefficients; returns `(period, shifted constituents, threshold on m
    /// per class)` with `n = period*m + class`.
    pub fn integer_shifted_form(&self) -> (u64, Vec<IntPoly>) {
        let mut denom_lcm = BigInt::one();
        for q in &self.constituents {
            for c in q.coeffs() {
                denom_lcm = denom_lcm.lcm(c.denom());
            }
        }
        let d = denom_lcm.to_u64().expect("desk-scale denominator");
        // Any multiple of lcm(period, d) works; scan upward for the least
        // multiplier that already clears all denominators.
        for k in 1..=d {
            let t = self.period * k;
            let refined = self.refine(t).expect("multiple of the period");
            let shifted: Option<Vec<IntPoly>> =
                (0..t).map(|i| int_from_q(&refined.shifted(i))).collect();
            if let Some(shifted) = shifted {
                return (t, shifted);
            }
        }
        unreachable!("period * denominator lcm always clears denominators")
    }

    /// Threshold on the shifted variable `m` for a class of a
    /// `stride`-periodic view: smallest `m0` with `stride*m0 + class >=
    /// threshold`.
    pub fn shifted_threshold(&self, stride: u64, class: u64) -> BigInt {
        let diff = &self.threshold - BigInt::from(class);
        if diff.is_positive() {
            diff.div_ceil(&BigInt::from(stride))
        } else {
            BigInt::zero()
        }
    }

    /// Assembles `F(n) = classes[n mod stride]((n - n mod stride)/stride)`
    /// from per-class functions of the quotient variable `m`.
    pub fn from_class_functions(stride: u64, classes: &[EventualQP]) -> EventualQP {
        assert_eq!(classes.len(), stride as usize);
        let mut inner = 1u64;
        for f in classes {
            inner = inner.lcm(&f.period);
        }
        let t = stride * inner;
        let s = BigRational::from_integer(BigInt::from(stride));
        let mut constituents = Vec::with_capacity(t as usize);
        let mut threshold = BigInt::zero();
        for c in 0..t {
            let i = c % stride;
            let f = &classes[i as usize];
            let m_class = ((c - i) / stride) % f.period;
            // n = stride*m + i  =>  m = (n - i)/stride.
            let a = s.recip();
            let b = -BigRational::from_integer(BigInt::from(i)) / s.clone();
            constituents.push(f.constituent(m_class).compose_affine(&a, &b));
            let cand = BigInt::from(stride) * &f.threshold + BigInt::from(i);
            if cand > threshold {
                threshold = cand;
            }
        }
        EventualQP {
            period: t,
            constituents,
            threshold,
        }
        .canonicalize()
    }

    /// Lowers the threshold toward 0 wherever `truth` confirms the closed
    /// form by direct evaluation. Sound: only verified values are claimed.
    pub fn tighten_with(&self, truth: impl Fn(&BigInt) -> Option<BigInt>) -> EventualQP {
        let mut t = self.threshold.clone();
        while t > BigInt::zero() {
            let below = &t - 1;
            match truth(&below) {
                Some(v) if v == self.evaluate(&below) => t = below,
                _ => break,
            }
        }
        let mut out = self.clone();
        out.threshold = t;
        out
    }

    /// Rational generating function of the eventual extension:
    /// `sum_{n>=0} q_{n mod T}(n) t^n` with denominator `(1 - t^T)^(deg+1)`.
    pub fn to_generating_function(&self) -> RationalGF {
        let deg = self
            .constituents
            .iter()
            .filter_map(|q| q.degree())
            .max()
            .unwrap_or(0);
        let t = self.period as usize;
        // (1 - z) and (1 - t^T) as integer polynomials in the series variable.
        let one_minus_z = IntPoly::from_i64s(&[1, -1]);
        let mut num = IntPoly::zero();
        for i in 0..t {
            // Values of this class along its progression are integers.
            let values: Vec<BigInt> = (0..=deg as i64 + 1)
                .map(|m| {
                    let n = BigInt::from(m) * t as i64 + BigInt::from(i as i64);
                    let v = self.constituents[i].eval_int(&n);
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect();
            // Forward differences at 0.
            let mut diffs = values;
            let mut deltas = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                deltas.push(diffs[0].clone());
                for k in 0..diffs.len() - 1 {
                    diffs[k] = &diffs[k + 1] - &diffs[k];
                }
                diffs.pop();
            }
            // sum_m p(m) z^m = sum_j delta_j z^j / (1-z)^(j+1); bring to the
            // common denominator (1-z)^(deg+1).
            let mut b = IntPoly::zero();
            for (j, delta) in deltas.iter().enumerate() {
                let mut term = IntPoly::constant(delta.clone());
                for _ in 0..(deg - j) {
                    term = &term * &one_minus_z;
                }
                b = &b + &term.shift_up(j);
            }
            // Substitute z = t^T and shift by t^i.
            let mut b_in_t = IntPoly::zero();
            for (k, c) in b.coeffs().iter().enumerate() {
                b_in_t = &b_in_t + &IntPoly::constant(c.clone()).shift_up(k * t);
            }
            num = &num + &b_in_t.shift_up(i);
        }
        let mut one_minus_tt = IntPoly::constant(BigInt::one());
        one_minus_tt = &one_minus_tt - &IntPoly::one().shift_up(t);
        let mut den = IntPoly::one();
        for _ in 0..=deg {
            den = &den * &one_minus_tt;
        }
        RationalGF { num, den }
    }
}

/// Rational generating function: a pair of integer polynomials in the
/// series variable `t`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalGF {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl RationalGF {
    /// Reduced form (canonical rational function).
    pub fn reduced(&self) -> RatFunc {
        RatFunc::new(self.num.clone(), self.den.clone()).expect("nonzero denominator")
    }

    /// First `count` power series coefficients of `num/den`
    /// (`den(0)` must be a unit).
    pub fn series(&self, count: usize) -> Vec<BigInt> {
        let d0 = self.den.coeff(0);
        assert!(d0.abs().is_one(), "denominator constant term must be a unit");
        let mut out: Vec<BigInt> = Vec::with_capacity(count);
        for k in 0..count {
            // num_k = sum_{j<=k} den_j * s_{k-j}  =>  solve for s_k.
            let mut acc = self.num.coeff(k);
            for j in 1..=k {
                acc -= self.den.coeff(j) * &out[k - j];
            }
            let (q, r) = acc.div_rem(&d0);
            debug_assert!(r.is_zero());
            out.push(q);
        }
        out
    }

    /// Equality as rational functions.
    pub fn eq_as_function(&self, other: &RationalGF) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        self.num.fmt_with_var(f, "t")?;
        write!(f, ")/(")?;
        self.den.fmt_with_var(f, "t")?;
        write!(f, ")")
    }
}

impl fmt::Display for EventualQP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.constituents.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "class {i} (mod {}), n >= {}: {q}", self.period, self.threshold)?;
        }
        Ok(())
    }
}

impl fmt::Debug for EventualQP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse the canonical text form produced by `Display`.
pub fn parse_eqp(text: &str) -> Result<EventualQP> {
    let mut period = 0u64;
    let mut threshold = BigInt::zero();
    let mut classes: Vec<(u64, QPoly)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("class ")
            .ok_or_else(|| Error::Parse("expected `class i (mod T), n >= N0: poly`".to_string()))?;
        let (head, poly_text) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("missing `:`".to_string()))?;
        let mut parts = head.split(',');
        let class_part = parts.next().unwrap_or("").trim();
        let thr_part = parts.next().unwrap_or("").trim();
        let (i_str, t_str) = class_part
            .split_once("(mod")
            .ok_or_else(|| Error::Parse("missing `(mod T)`".to_string()))?;
        let i: u64 = i_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse("bad class index".to_string()))?;
        let t: u64 = t_str
            .trim()
            .trim_end_matches(')')
            .parse()
            .map_err(|_| Error::Parse("bad period".to_string()))?;
        let n0 = thr_part
            .strip_prefix("n >=")
            .ok_or_else(|| Error::Parse("missing `n >= N0`".to_string()))?
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse("bad threshold".to_string()))?;
        period = t;
        if n0 > threshold {
            threshold = n0;
        }
        classes.push((i, parse_qpoly(poly_text.trim())?));
    }
    if period == 0 {
        return Err(Error::Parse("no classes".to_string()));
    }
    let mut constituents = vec![QPoly::zero(); period as usize];
    for (i, q) in classes {
        if i >= period {
            return Err(Error::Parse("class index out of range".to_string()));
        }
        constituents[i as usize] = q;
    }
    EventualQP::new(period, constituents, threshold)
}

/// Parse a rational-coefficient polynomial in one variable as a sum of
/// terms like `3/2n^2 - n + 5`.
pub fn parse_qpoly(s: &str) -> Result<QPoly> {
    let bad = |msg: &str| Error::Parse(format!("{msg} in {s:?}"));
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    let mut out = QPoly::zero();
    let mut any = false;
    loop {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if pos == chars.len() {
            break;
        }
        let mut negative = false;
        if chars[pos] == '+' || chars[pos] == '-' {
            negative = chars[pos] == '-';
            pos += 1;
            while pos < chars.len() && chars[pos].is_whitespace() {
                pos += 1;
            }
        } else if any {
            return Err(bad("expected `+` or `-` between terms"));
        }
        let read_uint = |pos: &mut usize| -> Option<BigInt> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                None
            } else {
                chars[start..*pos].iter().collect::<alloc::string::String>().parse().ok()
            }
        };
        let mut coeff = match read_uint(&mut pos) {
            Some(n) => {
                let mut c = BigRational::from_integer(n);
                if pos < chars.len() && chars[pos] == '/' {
                    pos += 1;
                    let d = read_uint(&mut pos).ok_or_else(|| bad("missing denominator"))?;
                    if d.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    c /= BigRational::from_integer(d);
                }
                c
            }
            None => BigRational::one(),
        };
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
        }
        let mut power = 0usize;
        if pos < chars.len() && chars[pos].is_alphabetic() {
            pos += 1;
            power = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                power = read_uint(&mut pos)
                    .and_then(|e| e.to_usize())
                    .ok_or_else(|| bad("bad exponent"))?;
            }
        }
        if negative {
            coeff = -coeff;
        }
        out = &out + &QPoly::monomial(coeff, power);
        any = true;
    }
    if !any {
        return Err(bad("empty polynomial"));
    }
    Ok(out)
}
