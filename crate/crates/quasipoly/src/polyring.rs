//! Exact univariate polynomial arithmetic over the integers and rationals,
//! rational functions, eventual sign/order decisions, and the base-`n`
//! digit representation.
//!
//! All decisions here are *eventual*: a sign or ordering is reported
//! together with an explicit integer threshold past which it is certified
//! to hold. Thresholds start from a Cauchy root bound and are then
//! tightened by direct evaluation down to the minimal valid value, which
//! keeps them sound.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient ring requirements for [`Poly`].
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl Coeff for BigInt {}
impl Coeff for BigRational {}

/// Dense univariate polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

/// Integer-coefficient polynomial in one variable.
pub type IntPoly = Poly<BigInt>;
/// Rational-coefficient polynomial in one variable.
pub type QPoly = Poly<BigRational>;

impl<C: Coeff> Poly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The polynomial `x`.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![C::zero(), C::one()])
    }

    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// `p(a*x + b)`.
    pub fn compose_affine(&self, a: &C, b: &C) -> Self {
        let lin = Poly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl IntPoly {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant_i64(c: i64) -> Self {
        Poly::constant(BigInt::from(c))
    }

    /// Gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> IntPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        self.exact_div_scalar(&g).expect("content divides")
    }

    pub fn exact_div_scalar(&self, d: &BigInt) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Poly::from_coeffs(out))
    }

    /// Exact polynomial division; `None` if `rhs` does not divide `self`
    /// over the rationals with an integer quotient.
    pub fn exact_div(&self, rhs: &IntPoly) -> Option<IntPoly> {
        if rhs.is_zero() {
            return None;
        }
        let q = self.to_q().exact_div(&rhs.to_q())?;
        int_from_q(&q)
    }

    pub fn to_q(&self) -> QPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    /// Gcd in `Z[x]` (content gcd times primitive gcd), nonnegative
    /// leading coefficient.
    pub fn gcd_poly(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return abs_lc(other);
        }
        if other.is_zero() {
            return abs_lc(self);
        }
        let mut a = self.to_q();
        let mut b = other.to_q();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        let (int_g, _) = a.clear_denominators();
        let c = self.content().gcd(&other.content());
        abs_lc(&int_g.primitive_part().scale(&c))
    }
}

fn abs_lc(p: &IntPoly) -> IntPoly {
    match p.leading_coeff() {
        Some(lc) if lc.is_negative() => -p,
        _ => p.clone(),
    }
}

/// Integer polynomial from a rational one; `None` if any coefficient is
/// not an integer.
pub fn int_from_q(p: &QPoly) -> Option<IntPoly> {
    let mut out = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(Poly::from_coeffs(out))
}

impl QPoly {
    /// Euclidean division over the rationals.
    pub fn div_rem(&self, rhs: &QPoly) -> Option<(QPoly, QPoly)> {
        let dl = rhs.degree()?;
        let lc = rhs.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dl {
                break;
            }
            let c = rem.leading_coeff().unwrap().clone() / lc.clone();
            let t = QPoly::monomial(c, dr - dl);
            quot = &quot + &t;
            rem = &rem - &(&t * rhs);
        }
        Some((quot, rem))
    }

    pub fn exact_div(&self, rhs: &QPoly) -> Option<QPoly> {
        let (q, r) = self.div_rem(rhs)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// `(p_int, d)` with `p = p_int / d` and `d` the lcm of coefficient
    /// denominators.
    pub fn clear_denominators(&self) -> (IntPoly, BigInt) {
        let mut d = BigInt::one();
        for c in self.coeffs() {
            d = d.lcm(c.denom());
        }
        let p = self.map(|c| (c * BigRational::from_integer(d.clone())).to_integer());
        (p, d)
    }

    pub fn eval_int(&self, n: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(n.clone()))
    }

    pub fn eval_i64(&self, n: i64) -> BigRational {
        self.eval_int(&BigInt::from(n))
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Eventual sign and ordering
// ---------------------------------------------------------------------------

/// Sign of an eventually monotone quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &BigInt) -> Sign {
        match x.sign() {
            num_bigint::Sign::Minus => Sign::Negative,
            num_bigint::Sign::NoSign => Sign::Zero,
            num_bigint::Sign::Plus => Sign::Positive,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

/// Sign of `p(n)` for all `n >= threshold`, with the minimal nonnegative
/// threshold that the Cauchy root bound certifies.
pub fn eventual_sign(p: &IntPoly) -> (Sign, BigInt) {
    if p.is_zero() {
        return (Sign::Zero, BigInt::zero());
    }
    let lc = p.leading_coeff().unwrap();
    let sign = Sign::of(lc);
    // Cauchy bound: all real roots are < 1 + max|a_i| / |lc|.
    let mut max_abs = BigInt::zero();
    let deg = p.degree().unwrap();
    for c in &p.coeffs()[..deg] {
        if c.abs() > max_abs {
            max_abs = c.abs();
        }
    }
    let bound = BigInt::one() + max_abs.div_ceil(&lc.abs());
    (sign, tighten_threshold(bound, |n| Sign::of(&p.eval(n)) == sign))
}

/// Sign of a rational-coefficient polynomial for `n >= threshold`.
pub fn eventual_sign_q(p: &QPoly) -> (Sign, BigInt) {
    let (ip, _) = p.clear_denominators();
    eventual_sign(&ip)
}

/// Lower `bound` to the minimal `t >= 0` such that `ok(n)` holds on every
/// integer in `[t, bound)`. Sound whenever `ok` is known to hold at and
/// beyond `bound`.
fn tighten_threshold(bound: BigInt, ok: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut t = bound;
    while t > BigInt::zero() {
        let below = &t - 1;
        if ok(&below) {
            t = below;
        } else {
            break;
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// Quotient of two integer polynomials in canonical form: numerator and
/// denominator reduced by content and polynomial gcd, denominator with
/// positive leading coefficient. Equality is syntactic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: IntPoly, den: IntPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            };
        }
        let g = num.gcd_poly(&den);
        let mut num = num.exact_div(&g).expect("gcd divides");
        let mut den = den.exact_div(&g).expect("gcd divides");
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.exact_div_scalar(&c).unwrap();
            den = den.exact_div_scalar(&c).unwrap();
        }
        if den.leading_coeff().map_or(false, |lc| lc.is_negative()) {
            num = -&num;
            den = -&den;
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: IntPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> RatFunc {
        RatFunc::from_poly(IntPoly::constant_i64(c))
    }

    pub fn from_rational(q: &BigRational) -> RatFunc {
        RatFunc {
            num: IntPoly::constant(q.numer().clone()),
            den: IntPoly::constant(q.denom().clone()),
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(IntPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(IntPoly::one())
    }

    /// `deg(num) - deg(den)`; `None` for zero.
    pub fn degree(&self) -> Option<isize> {
        Some(self.num.degree()? as isize - self.den.degree().unwrap() as isize)
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::canonical(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::canonical(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::canonical(
            &self.num * &rhs.den,
            &self.den * &rhs.num,
        ))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::one().div(self)
    }

    /// `None` when the denominator vanishes at `n`.
    pub fn eval(&self, n: &BigInt) -> Option<BigRational> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(self.num.eval(n), d))
    }

    pub fn eval_i64(&self, n: i64) -> Option<BigRational> {
        self.eval(&BigInt::from(n))
    }

    /// Threshold past which the denominator is certified nonzero.
    pub fn den_nonzero_threshold(&self) -> BigInt {
        eventual_sign(&self.den).1
    }

    /// Sign of the value for all `n >= threshold`.
    pub fn eventual_sign(&self) -> (Sign, BigInt) {
        let (sn, tn) = eventual_sign(&self.num);
        let (_, td) = eventual_sign(&self.den);
        // Canonical form has positive leading denominator coefficient.
        (sn, tn.max(td))
    }
}

/// Eventual ordering of two rational functions, with a threshold past
/// which the ordering (and nonvanishing of both denominators) is
/// certified.
pub fn eventual_compare(r1: &RatFunc, r2: &RatFunc) -> (Ordering, BigInt) {
    let diff = r1.sub(r2);
    let (sign, t_sign) = diff.eventual_sign();
    let ord = match sign {
        Sign::Negative => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Positive => Ordering::Greater,
    };
    let bound = t_sign
        .max(r1.den_nonzero_threshold())
        .max(r2.den_nonzero_threshold());
    let t = tighten_threshold(bound, |n| match (r1.eval(n), r2.eval(n)) {
        (Some(a), Some(b)) => a.cmp(&b) == ord,
        _ => false,
    });
    (ord, t)
}

// ---------------------------------------------------------------------------
// Base-n representation
// ---------------------------------------------------------------------------

/// One digit `c(n) = slope * n + intercept` of a base-`n` representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digit {
    pub slope: BigInt,
    pub intercept: BigInt,
}

impl Digit {
    pub fn eval(&self, n: &BigInt) -> BigInt {
        &self.slope * n + &self.intercept
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::from_coeffs(vec![self.intercept.clone(), self.slope.clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.slope.is_zero() && self.intercept.is_zero()
    }
}

/// Base-`n` representation of an eventually positive polynomial:
/// `p(n) = sum_i digits[i](n) * n^i` with `0 <= digits[i](n) <= n-1` for
/// all `n >= threshold`, and the top digit positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseNRepr {
    pub digits: Vec<Digit>,
    pub threshold: BigInt,
}

impl BaseNRepr {
    /// `deg_n` of the represented polynomial.
    pub fn deg_n(&self) -> usize {
        self.digits.len().saturating_sub(1)
    }

    /// Reconstruct the represented polynomial: `sum digits[i](n) * n^i`.
    pub fn to_poly(&self) -> IntPoly {
        let mut acc = IntPoly::zero();
        for (i, d) in self.digits.iter().enumerate() {
            acc = &acc + &d.to_poly().shift_up(i);
        }
        acc
    }
}

/// Unique base-`n` representation of an eventually positive polynomial.
/// Threshold is `max_i |a_i| + 1` over the standard coefficients.
pub fn base_n_repr(p: &IntPoly) -> Result<BaseNRepr> {
    if p.leading_coeff().map_or(true, |lc| !lc.is_positive()) {
        return Err(Error::Domain(
            "base-n representation needs a positive leading coefficient".to_string(),
        ));
    }
    let mut max_abs = BigInt::zero();
    for c in p.coeffs() {
        if c.abs() > max_abs {
            max_abs = c.abs();
        }
    }
    let threshold = max_abs + 1;

    let mut work: Vec<BigInt> = p.coeffs().to_vec();
    let mut digits = Vec::with_capacity(work.len());
    for i in 0..work.len() {
        if work[i].is_negative() {
            // c_i(n) = n + a_i, borrow one from the next digit.
            digits.push(Digit {
                slope: BigInt::one(),
                intercept: work[i].clone(),
            });
            work[i + 1] -= 1; // leading coefficient is positive, so i+1 exists
        } else {
            digits.push(Digit {
                slope: BigInt::zero(),
                intercept: work[i].clone(),
            });
        }
    }
    while digits.last().map_or(false, |d| d.is_zero()) {
        digits.pop();
    }
    Ok(BaseNRepr { digits, threshold })
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push(Token::Plus);
                i += 1;
            }
            b'-' => {
                out.push(Token::Minus);
                i += 1;
            }
            b'*' => {
                out.push(Token::Star);
                i += 1;
            }
            b'^' => {
                out.push(Token::Caret);
                i += 1;
            }
            b'(' => {
                out.push(Token::LParen);
                i += 1;
            }
            b')' => {
                out.push(Token::RParen);
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &s[start..i];
                let v = lit
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format_parse(lit)))?;
                out.push(Token::Int(v));
            }
            b if b.is_ascii_alphabetic() => {
                out.push(Token::Var);
                i += 1;
            }
            _ => {
                return Err(Error::Parse(
                    alloc::format!("unexpected character {:?}", b as char),
                ))
            }
        }
    }
    Ok(out)
}

fn format_parse(lit: &str) -> String {
    alloc::format!("bad integer literal {lit:?}")
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<IntPoly> {
        let mut negate = false;
        while let Some(t) = self.peek() {
            match t {
                Token::Minus => {
                    negate = !negate;
                    self.pos += 1;
                }
                Token::Plus => self.pos += 1,
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        while let Some(t) = self.peek() {
            match t {
                Token::Plus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Token::Minus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                // Implicit multiplication: 3n^2, 2(n+1), n n.
                Some(Token::Int(_)) | Some(Token::Var) | Some(Token::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            match self.bump() {
                Some(Token::Int(e)) => {
                    let e = u32::try_from(e.clone())
                        .map_err(|_| Error::Parse("exponent out of range".to_string()))?;
                    let mut acc = IntPoly::one();
                    for _ in 0..e {
                        acc = &acc * &base;
                    }
                    Ok(acc)
                }
                _ => Err(Error::Parse("expected integer exponent after ^".to_string())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<IntPoly> {
        match self.bump().cloned() {
            Some(Token::Int(v)) => Ok(IntPoly::constant(v)),
            Some(Token::Var) => Ok(IntPoly::var()),
            Some(Token::Minus) => {
                let f = self.factor()?;
                Ok(-&f)
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing closing parenthesis".to_string())),
                }
            }
            other => Err(Error::Parse(alloc::format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse polynomial text: integer literals, one variable letter,
/// `+ - * ^`, implicit multiplication (`3n^2`), parentheses.
pub fn parse_poly(s: &str) -> Result<IntPoly> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty input".to_string()));
    }
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
    };
    let poly = p.expr()?;
    if p.pos != tokens.len() {
        return Err(Error::Parse("trailing input".to_string()));
    }
    Ok(poly)
}

/// Parse `num/den` rational function text; a bare polynomial is accepted
/// with denominator 1.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    // Split at a '/' that is not inside parentheses.
    let mut depth = 0usize;
    let mut split = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '/' if depth == 0 => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    match split {
        None => Ok(RatFunc::from_poly(parse_poly(s)?)),
        Some(i) => RatFunc::new(parse_poly(&s[..i])?, parse_poly(&s[i + 1..])?),
    }
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

fn fmt_term<C: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    neg: bool,
    coeff_str: Option<C>,
    var: &str,
    power: usize,
) -> fmt::Result {
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    match (coeff_str, power) {
        (Some(c), 0) => write!(f, "{c}"),
        (Some(c), 1) => write!(f, "{c}{var}"),
        (Some(c), p) => write!(f, "{c}{var}^{p}"),
        (None, 0) => write!(f, "1"),
        (None, 1) => write!(f, "{var}"),
        (None, p) => write!(f, "{var}^{p}"),
    }
}

impl IntPoly {
    pub fn fmt_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let coeff = if a.is_one() && i > 0 { None } else { Some(a) };
            fmt_term(f, first, neg, coeff, var, i)?;
            first = false;
        }
        Ok(())
    }
}

impl QPoly {
    pub fn fmt_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let coeff = if a.is_one() && i > 0 { None } else { Some(a) };
            fmt_term(f, first, neg, coeff, var, i)?;
            first = false;
        }
        Ok(())
    }
}

/// Borrowed polynomial paired with a variable name for display.
pub struct PolyDisplay<'a> {
    poly: &'a IntPoly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt_with_var(f, self.var)
    }
}

impl IntPoly {
    pub fn display_with_var<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var(f, "n")
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var(f, "n")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var(f, "n")
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var(f, "n")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == IntPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("3n^3+1"), IntPoly::from_i64s(&[1, 0, 0, 3]));
        assert_eq!(p("n^2 - 9n + 1"), IntPoly::from_i64s(&[1, -9, 1]));
        assert_eq!(p("x^2+3x"), IntPoly::from_i64s(&[0, 3, 1]));
        assert_eq!(p("(n+1)(n-1)"), IntPoly::from_i64s(&[-1, 0, 1]));
        assert_eq!(p("-2n+7"), IntPoly::from_i64s(&[7, -2]));
        assert_eq!(p("0"), IntPoly::zero());
        assert_eq!(alloc::format!("{}", p("3n^2-n-1")), "3n^2 - n - 1");
        assert!(parse_poly("3n^").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("2$").is_err());
    }

    #[test]
    fn ring_laws_by_evaluation() {
        // op(p, q)(n) = op(p(n), q(n)) for a spread of random-ish inputs.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..100 {
            let a: Vec<i64> = (0..(next() % 5)).map(|_| (next() % 41) as i64 - 20).collect();
            let b: Vec<i64> = (0..(next() % 5)).map(|_| (next() % 41) as i64 - 20).collect();
            let n = BigInt::from((next() % 61) as i64 - 30);
            let pa = IntPoly::from_coeffs(a.iter().map(|&c| BigInt::from(c)).collect());
            let pb = IntPoly::from_coeffs(b.iter().map(|&c| BigInt::from(c)).collect());
            assert_eq!((&pa + &pb).eval(&n), pa.eval(&n) + pb.eval(&n));
            assert_eq!((&pa - &pb).eval(&n), pa.eval(&n) - pb.eval(&n));
            assert_eq!((&pa * &pb).eval(&n), pa.eval(&n) * pb.eval(&n));
        }
    }

    #[test]
    fn eventual_sign_zero() {
        assert_eq!(eventual_sign(&IntPoly::zero()), (Sign::Zero, BigInt::zero()));
    }

    #[test]
    fn eventual_sign_paper_comparison() {
        // n^2 - 4n + 1 > 5n for all n > 9.
        let diff = p("n^2-9n+1");
        let (s, t) = eventual_sign(&diff);
        assert_eq!(s, Sign::Positive);
        assert!(t <= BigInt::from(10));
        for n in 10..30 {
            assert!(diff.eval_i64(n).is_positive());
        }
    }

    #[test]
    fn eventual_sign_linear() {
        let (s, t) = eventual_sign(&p("-2n+7"));
        assert_eq!(s, Sign::Negative);
        assert_eq!(t, BigInt::from(4));
        for n in 4..21 {
            assert!(p("-2n+7").eval_i64(n).is_negative());
        }
    }

    #[test]
    fn compare_intro_chain() {
        // 3/(3n+1) < (3n^2+n-1)/(3n^3+1) < (n+1)/n^2 eventually.
        let a = parse_ratfunc("3/(3n+1)").unwrap();
        let b = parse_ratfunc("(3n^2+n-1)/(3n^3+1)").unwrap();
        let c = parse_ratfunc("(n+1)/(n^2)").unwrap();
        let (o1, t1) = eventual_compare(&a, &b);
        let (o2, t2) = eventual_compare(&b, &c);
        assert_eq!(o1, Ordering::Less);
        assert_eq!(o2, Ordering::Less);
        for k in 0..50i64 {
            let n = BigInt::from(k) + t1.clone().max(t2.clone()).max(BigInt::one());
            assert!(a.eval(&n).unwrap() < b.eval(&n).unwrap());
            assert!(b.eval(&n).unwrap() < c.eval(&n).unwrap());
        }
    }

    #[test]
    fn compare_reflexive() {
        let f = parse_ratfunc("(n+2)/(3n+1)").unwrap();
        let (o, t) = eventual_compare(&f, &f);
        assert_eq!(o, Ordering::Equal);
        assert_eq!(t, BigInt::zero());
    }

    #[test]
    fn ratfunc_canonical() {
        // (2n^2+2n)/(4n) reduces to (n+1)/2.
        let r = RatFunc::new(p("2n^2+2n"), p("4n")).unwrap();
        assert_eq!(r.num(), &p("n+1"));
        assert_eq!(r.den(), &p("2"));
        // Denominator sign is normalized.
        let r = RatFunc::new(p("n"), p("-n-1")).unwrap();
        assert_eq!(r.den(), &p("n+1"));
        assert_eq!(r.num(), &p("-n"));
        assert!(RatFunc::new(p("1"), IntPoly::zero()).is_err());
    }

    #[test]
    fn base_n_examples() {
        // n^2 - n + 3 -> d=1, c1 = n-1, c0 = 3.
        let r = base_n_repr(&p("n^2-n+3")).unwrap();
        assert_eq!(r.deg_n(), 1);
        assert_eq!(r.digits[1].to_poly(), p("n-1"));
        assert_eq!(r.digits[0].to_poly(), p("3"));

        // Constant 5 -> d=0, c0=5, threshold 6.
        let r = base_n_repr(&p("5")).unwrap();
        assert_eq!(r.deg_n(), 0);
        assert_eq!(r.digits[0].to_poly(), p("5"));
        assert_eq!(r.threshold, BigInt::from(6));

        // n^3 - 2n -> d=2, c2=n-1, c1=n-2, c0=0.
        let r = base_n_repr(&p("n^3-2n")).unwrap();
        assert_eq!(r.deg_n(), 2);
        assert_eq!(r.digits[2].to_poly(), p("n-1"));
        assert_eq!(r.digits[1].to_poly(), p("n-2"));
        assert_eq!(r.digits[0].to_poly(), IntPoly::zero());

        assert!(base_n_repr(&p("-n+1")).is_err());
    }

    #[test]
    fn base_n_digit_extraction_oracle() {
        // Digits of p(n) written in base n for concrete n match the
        // symbolic digits.
        let poly = p("n^3-2n");
        let r = base_n_repr(&poly).unwrap();
        for n in 10..=20i64 {
            let big_n = BigInt::from(n);
            let mut v = poly.eval(&big_n);
            let mut concrete = Vec::new();
            while v.is_positive() {
                let (q, rem) = v.div_rem(&big_n);
                concrete.push(rem);
                v = q;
            }
            let symbolic: Vec<BigInt> = r.digits.iter().map(|d| d.eval(&big_n)).collect();
            let mut symbolic = symbolic;
            while symbolic.last().map_or(false, |d| d.is_zero()) {
                symbolic.pop();
            }
            assert_eq!(concrete, symbolic, "n = {n}");
        }
    }

    #[test]
    fn base_n_round_trip_and_bounds() {
        for s in ["n^2-n+3", "n^3-2n", "5", "7n^4-13n^2+2n-9", "n+1"] {
            let poly = p(s);
            let r = base_n_repr(&poly).unwrap();
            // Polynomial identity round trip.
            assert_eq!(r.to_poly(), poly, "{s}");
            // Digit bounds on [C, C+50].
            let c = r.threshold.clone();
            for k in 0..=50 {
                let n = &c + BigInt::from(k);
                for d in &r.digits {
                    let v = d.eval(&n);
                    assert!(!v.is_negative() && v < n, "{s} at n={n}");
                }
                let top = r.digits.last().unwrap().eval(&n);
                assert!(top.is_positive());
            }
        }
    }

    #[test]
    fn gcd_poly_basics() {
        let g = p("n^2+2n").gcd_poly(&p("2n+4"));
        assert_eq!(g, p("n+2"));
        assert_eq!(p("0").gcd_poly(&p("-3n")), p("3n"));
        assert_eq!(p("6").gcd_poly(&p("4")), p("2"));
    }
}
