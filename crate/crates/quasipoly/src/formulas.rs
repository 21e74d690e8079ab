//! Closed-form counting formulas: the generalized Popoviciu formula for one
//! equation in two unknowns, the two-region formulas for a 2x3 system, and
//! the two-dimensional machinery of generalized continued fractions with the
//! signed unimodular cone decomposition they drive.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eqp::EventualQP;
use crate::error::{Error, Result};
use crate::gendiv::{gdiv_eqp, gdiv_poly, ggcd, ggcd_many, gmod_inverse, try_exact_div_eqp};
use crate::oracle::{self, VerificationReport};
use crate::polyring::{
    eventual_compare, eventual_sign, IntPoly, RatFunc, Sign,
};

/// Search bound for coprimality certificates.
const CERT_BOUND: i64 = 20;
/// Caps for the continued fraction expansion.
const CF_CLASS_CAP: usize = 4096;
const CF_TERM_CAP: usize = 64;
const CF_STRIDE_CAP: u64 = 1 << 20;

fn max_assign(acc: &mut BigInt, t: &BigInt) {
    if t > acc {
        acc.clone_from(t);
    }
}

// ---------------------------------------------------------------------------
// Generalized Popoviciu formula
// ---------------------------------------------------------------------------

/// Number of nonnegative integer solutions of `a(n) x + b(n) y = m(n)`:
/// `m/(ab) - {a^{-1}m/b} - {b^{-1}m/a} + 1` after dividing out the
/// generalized gcd of `a` and `b`.
pub fn popoviciu_count(a: &EventualQP, b: &EventualQP, m: &EventualQP) -> Result<EventualQP> {
    if !a.is_eventually_positive() || !b.is_eventually_positive() {
        return Err(Error::Domain(
            "popoviciu needs eventually positive coefficients".to_string(),
        ));
    }
    let d = ggcd(a, b)?;
    if d.eq_eventually(&EventualQP::one()) {
        return popoviciu_coprime(a, b, m);
    }
    // Divide the gcd out of both sides; classes where it fails to divide the
    // right side contribute nothing.
    let (q, r) = gdiv_eqp(m, &d)?;
    let mut thr = r.threshold().clone();
    let mut indicator_classes = Vec::with_capacity(r.period() as usize);
    for i in 0..r.period() {
        if r.constituent(i).is_zero() {
            indicator_classes.push(crate::polyring::QPoly::one());
        } else {
            let (_, t) = crate::polyring::eventual_sign_q(r.constituent(i));
            let shifted = r.period() as i64;
            let _ = shifted;
            max_assign(&mut thr, &(&t * BigInt::from(r.period()) + BigInt::from(i)));
            indicator_classes.push(crate::polyring::QPoly::zero());
        }
    }
    let indicator = EventualQP::new(r.period(), indicator_classes, thr)?;
    let ap = try_exact_div_eqp(a, &d)
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".to_string()))?;
    let bp = try_exact_div_eqp(b, &d)
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".to_string()))?;
    let core = popoviciu_coprime(&ap, &bp, &q)?;
    Ok(core.mul(&indicator).canonicalize().max_threshold(core.threshold()))
}

fn popoviciu_coprime(a: &EventualQP, b: &EventualQP, m: &EventualQP) -> Result<EventualQP> {
    let a_inv = gmod_inverse(a, b)?;
    let b_inv = gmod_inverse(b, a)?;
    let (_, r1) = gdiv_eqp(&a_inv.mul(m), b)?;
    let (_, r2) = gdiv_eqp(&b_inv.mul(m), a)?;
    // m/(ab) - r1/b - r2/a = (m - r1 a - r2 b)/(ab), an integer.
    let num = m.sub(&r1.mul(a)).sub(&r2.mul(b));
    let den = a.mul(b);
    let frac = try_exact_div_eqp(&num, &den)
        .ok_or_else(|| Error::Internal("popoviciu combination is not integral".to_string()))?;
    Ok(frac.add(&EventualQP::one()).canonicalize().max_threshold(frac.threshold()))
}

// ---------------------------------------------------------------------------
// 2x3 systems
// ---------------------------------------------------------------------------

/// Column data of a 2x3 system with slope-ordered columns, its minors, and
/// coprimality certificates.
#[derive(Debug, Clone)]
pub struct PopoviciuData {
    pub x: [IntPoly; 3],
    pub y: [IntPoly; 3],
    pub y12: IntPoly,
    pub y13: IntPoly,
    pub y23: IntPoly,
    /// Certificate pairs `(f_12, g_12), (f_13, g_13), (f_23, g_23)`.
    pub certificates: [(BigInt, BigInt); 3],
    pub threshold: BigInt,
}

impl PopoviciuData {
    /// Validates slope ordering `y1/x1 < y2/x2 < y3/x3`, positivity, and the
    /// minor-gcd condition, then searches certificates.
    pub fn new(x: [IntPoly; 3], y: [IntPoly; 3]) -> Result<PopoviciuData> {
        let mut thr = BigInt::one();
        for p in &x {
            let (s, t) = eventual_sign(p);
            if s != Sign::Positive {
                return Err(Error::Domain("columns need eventually positive x".to_string()));
            }
            max_assign(&mut thr, &t);
        }
        let minor = |i: usize, j: usize| &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
        let y12 = minor(0, 1);
        let y13 = minor(0, 2);
        let y23 = minor(1, 2);
        for m in [&y12, &y23] {
            let (s, t) = eventual_sign(m);
            if s != Sign::Positive {
                return Err(Error::Domain(
                    "column slopes must be strictly increasing".to_string(),
                ));
            }
            max_assign(&mut thr, &t);
        }
        let (g, _) = ggcd_many(&[
            EventualQP::from_poly(&y12),
            EventualQP::from_poly(&y13),
            EventualQP::from_poly(&y23),
        ])?;
        if !g.eq_eventually(&EventualQP::one()) {
            return Err(Error::Domain(
                "minors are not jointly coprime; the closed form does not apply".to_string(),
            ));
        }
        max_assign(&mut thr, g.threshold());
        let certificates = find_certificates(
            &EventualQP::from_poly(&y12),
            &EventualQP::from_poly(&y13),
            &EventualQP::from_poly(&y23),
        )?;
        Ok(PopoviciuData {
            x,
            y,
            y12,
            y13,
            y23,
            certificates,
            threshold: thr,
        })
    }
}

/// Searches integer pairs `(f, g)` with `max(|f|, |g|)` increasing such that
/// the three combined minors are pointwise coprime to their targets:
/// `ggcd(f12 Y13 + g12 Y23, Y12) = 1`, `ggcd(f13 Y12 + g13 Y23, Y13) = 1`,
/// `ggcd(f23 Y13 + g23 Y12, Y23) = 1`.
pub fn find_certificates(
    y12: &EventualQP,
    y13: &EventualQP,
    y23: &EventualQP,
) -> Result<[(BigInt, BigInt); 3]> {
    let conditions: [(&EventualQP, &EventualQP, &EventualQP); 3] =
        [(y13, y23, y12), (y12, y23, y13), (y13, y12, y23)];
    let mut out = Vec::with_capacity(3);
    for (u, v, target) in conditions {
        let mut found = None;
        'search: for radius in 0..=CERT_BOUND {
            for f in -radius..=radius {
                for g in -radius..=radius {
                    if f.abs().max(g.abs()) != radius {
                        continue;
                    }
                    let combo = u
                        .mul(&EventualQP::from_int(f))
                        .add(&v.mul(&EventualQP::from_int(g)));
                    if combo.is_zero() && target.is_zero() {
                        continue;
                    }
                    let ok = match ggcd(&combo, target) {
                        Ok(d) => d.eq_eventually(&EventualQP::one()),
                        Err(_) => false,
                    };
                    if ok {
                        found = Some((BigInt::from(f), BigInt::from(g)));
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(p) => out.push(p),
            None => {
                return Err(Error::SearchExhausted(format!(
                    "no certificate pair within bound {CERT_BOUND}"
                )))
            }
        }
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn scaled(p: &IntPoly, c: &BigInt) -> EventualQP {
    EventualQP::from_poly(&p.scale(c))
}

/// Count over the first region with slope-ordered columns: `(m2 x1 - m1
/// y1)/(Y12 Y13)` minus the two fractional parts, plus one.  Returns `None`
/// when the combination is not integral, which disqualifies the formula.
#[allow(clippy::too_many_arguments)]
fn region_formula(
    x: &[IntPoly; 3],
    y: &[IntPoly; 3],
    m1: &EventualQP,
    m2: &EventualQP,
    y12: &EventualQP,
    y13: &EventualQP,
    y23: &EventualQP,
    c12: &(BigInt, BigInt),
    c13: &(BigInt, BigInt),
) -> Result<Option<EventualQP>> {
    let combo12 = y13
        .mul(&EventualQP::from_bigint(&c12.0))
        .add(&y23.mul(&EventualQP::from_bigint(&c12.1)));
    let inv12 = gmod_inverse(&combo12, y12)?;
    let mix12x = scaled(&x[0], &c12.0).add(&scaled(&x[1], &c12.1));
    let mix12y = scaled(&y[0], &c12.0).add(&scaled(&y[1], &c12.1));
    let arg12 = inv12.mul(&m2.mul(&mix12x).sub(&m1.mul(&mix12y)));
    let (_, r12) = gdiv_eqp(&arg12, y12)?;
    let combo13 = y12
        .mul(&EventualQP::from_bigint(&c13.0))
        .add(&y23.mul(&EventualQP::from_bigint(&c13.1)));
    let inv13 = gmod_inverse(&combo13, y13)?;
    // The third-column contribution enters the numerator with the opposite
    // sign to its minor in the inverse: this is what makes the fractional
    // part independent of the certificate choice (via the three-term minor
    // identity E1 Y23 - E2 Y13 + E3 Y12 = 0).
    let mix13x = scaled(&x[0], &c13.0).sub(&scaled(&x[2], &c13.1));
    let mix13y = scaled(&y[0], &c13.0).sub(&scaled(&y[2], &c13.1));
    let arg13 = inv13.mul(&m2.mul(&mix13x).sub(&m1.mul(&mix13y)));
    let (_, r13) = gdiv_eqp(&arg13, y13)?;
    let lead = m2
        .mul(&EventualQP::from_poly(&x[0]))
        .sub(&m1.mul(&EventualQP::from_poly(&y[0])));
    let num = lead.sub(&r12.mul(y13)).sub(&r13.mul(y12));
    Ok(try_exact_div_eqp(&num, &y12.mul(y13)).map(|f| f.add(&EventualQP::one())))
}

/// The second-region formula exactly as printed in its source, kept as a
/// fallback candidate for the verification window.
#[allow(clippy::too_many_arguments)]
fn printed_second_region(
    data: &PopoviciuData,
    m1: &EventualQP,
    m2: &EventualQP,
    y12: &EventualQP,
    y13: &EventualQP,
    y23: &EventualQP,
    c13: &(BigInt, BigInt),
    c23: &(BigInt, BigInt),
) -> Result<Option<EventualQP>> {
    let combo23 = y13
        .mul(&EventualQP::from_bigint(&c23.0))
        .add(&y12.mul(&EventualQP::from_bigint(&c23.1)));
    let inv23 = gmod_inverse(&combo23, y23)?;
    let mix23x = scaled(&data.x[2], &c23.0).add(&scaled(&data.x[1], &c23.1));
    let mix23y = scaled(&data.y[2], &c23.0).add(&scaled(&data.y[1], &c23.1));
    let arg23 = inv23.mul(&m1.mul(&mix23x).sub(&m2.mul(&mix23y)));
    let (_, r23) = gdiv_eqp(&arg23, y23)?;
    let combo13 = y12
        .mul(&EventualQP::from_bigint(&c13.0))
        .add(&y23.mul(&EventualQP::from_bigint(&c13.1)));
    let inv13 = gmod_inverse(&combo13, y13)?;
    let mix13x = scaled(&data.x[0], &c13.0).add(&scaled(&data.x[2], &c13.1));
    let mix13y = scaled(&data.y[0], &c13.0).add(&scaled(&data.y[2], &c13.1));
    let arg13 = inv13.mul(&m1.mul(&mix13x).sub(&m2.mul(&mix13y)));
    let (_, r13) = gdiv_eqp(&arg13, y13)?;
    let y3e = EventualQP::from_poly(&data.y[2]);
    let lead = m1.mul(&y3e).sub(&m2.mul(&y3e));
    let num = lead.sub(&r23.mul(y13)).sub(&r13.mul(y23));
    Ok(try_exact_div_eqp(&num, &y23.mul(y13)).map(|f| f.add(&EventualQP::one())))
}

/// Number of nonnegative solutions of the 2x3 system with columns
/// `(x_i, y_i)` and right side `(m1, m2)`, via the region formulas.  The
/// result is verified against enumeration on a sample window before being
/// returned, together with the verification report.
pub fn two_by_three_count(
    data: &PopoviciuData,
    m1: &IntPoly,
    m2: &IntPoly,
) -> Result<(EventualQP, VerificationReport)> {
    let slope_m = RatFunc::new(m2.clone(), m1.clone())?;
    let slope = |i: usize| RatFunc::new(data.y[i].clone(), data.x[i].clone());
    let mut thr = data.threshold.clone();
    let (lo, t_lo) = eventual_compare(&slope(0)?, &slope_m);
    let (hi, t_hi) = eventual_compare(&slope_m, &slope(2)?);
    max_assign(&mut thr, &t_lo);
    max_assign(&mut thr, &t_hi);
    if lo == core::cmp::Ordering::Greater || hi == core::cmp::Ordering::Greater {
        return Err(Error::Domain(
            "right side is eventually outside the positive span".to_string(),
        ));
    }
    let (mid, t_mid) = eventual_compare(&slope_m, &slope(1)?);
    max_assign(&mut thr, &t_mid);

    let m1e = EventualQP::from_poly(m1);
    let m2e = EventualQP::from_poly(m2);
    let [c12, c13, c23] = data.certificates.clone();
    let y12 = EventualQP::from_poly(&data.y12);
    let y13 = EventualQP::from_poly(&data.y13);
    let y23 = EventualQP::from_poly(&data.y23);

    let mut candidates: Vec<EventualQP> = Vec::new();
    if mid != core::cmp::Ordering::Greater {
        if let Some(c) =
            region_formula(&data.x, &data.y, &m1e, &m2e, &y12, &y13, &y23, &c12, &c13)?
        {
            candidates.push(c);
        }
    } else {
        // The printed second-region formula is inconsistent (its lead
        // vanishes whenever m1 = m2), but swapping the two rows and
        // reversing the column order carries the first region onto the
        // second while fixing Y13 and exchanging Y12 with Y23.  Try that
        // image first and keep the printed form as a fallback; the
        // verification window below arbitrates.
        let xs = [data.y[2].clone(), data.y[1].clone(), data.y[0].clone()];
        let ys = [data.x[2].clone(), data.x[1].clone(), data.x[0].clone()];
        let c13s = (c13.1.clone(), c13.0.clone());
        if let Some(c) = region_formula(&xs, &ys, &m2e, &m1e, &y23, &y13, &y12, &c23, &c13s)? {
            candidates.push(c);
        }
        if let Some(c) =
            printed_second_region(data, &m1e, &m2e, &y12, &y13, &y23, &c13, &c23)?
        {
            candidates.push(c);
        }
    }

    let mut counter = |n: &BigInt| {
        let a: Vec<Vec<BigInt>> = vec![
            data.x.iter().map(|p| p.eval(n)).collect(),
            data.y.iter().map(|p| p.eval(n)).collect(),
        ];
        let b = vec![m1.eval(n), m2.eval(n)];
        oracle::enumerate_diophantine(&a, &b, 100_000_000)
    };
    for cand in candidates {
        let mut cand = cand.canonicalize().max_threshold(&thr);
        // The counting function may still deviate from its eventual form on
        // a few small values; push the threshold past any early failures
        // before giving up on a candidate.
        let mut start = BigInt::from(2);
        for _ in 0..3 {
            let mut window = Vec::new();
            let mut n = start.clone();
            let end = &n + BigInt::from(2 * cand.period().max(3)) + BigInt::from(6);
            while n <= end {
                window.push(n.clone());
                n += 1;
            }
            let report = oracle::verify_eqp(&cand, &mut counter, &window)?;
            if report.pass {
                return Ok((cand, report));
            }
            let last_fail = report
                .samples
                .iter()
                .filter(|s| !s.pass)
                .map(|s| s.n.clone())
                .max();
            match last_fail {
                Some(f) if report.samples.iter().any(|s| s.pass && s.n > f) => {
                    start = &f + 1;
                    cand = cand.max_threshold(&start);
                }
                _ => break,
            }
        }
    }
    Err(Error::Internal(
        "no region formula candidate survives verification".to_string(),
    ))
}

// ---------------------------------------------------------------------------
// Generalized continued fractions
// ---------------------------------------------------------------------------

/// Continued fraction terms of `f/g` on one residue class `n = stride*s +
/// offset`, as integer polynomials in the class variable `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFClass {
    pub stride: u64,
    pub offset: u64,
    pub terms: Vec<IntPoly>,
    /// Bound on `n` past which the expansion is exact on this class.
    pub threshold: BigInt,
}

impl CFClass {
    /// Folds the terms back into a rational number at `n` on this class.
    pub fn value_at(&self, n: &BigInt) -> Option<BigRational> {
        let stride = BigInt::from(self.stride);
        let offset = BigInt::from(self.offset);
        if (n - &offset).mod_floor(&stride) != BigInt::zero() {
            return None;
        }
        let s = (n - &offset) / &stride;
        let mut acc: Option<BigRational> = None;
        for term in self.terms.iter().rev() {
            let t = BigRational::from_integer(term.eval(&s));
            acc = Some(match acc {
                None => t,
                Some(prev) => {
                    if prev.is_zero() {
                        return None;
                    }
                    t + prev.recip()
                }
            });
        }
        acc
    }
}

/// Continued fraction expansion of a ratio of polynomials, split into
/// residue classes with possibly different strides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub classes: Vec<CFClass>,
}

impl CFExpansion {
    pub fn class_for(&self, n: &BigInt) -> Option<&CFClass> {
        self.classes.iter().find(|c| {
            (n - BigInt::from(c.offset)).mod_floor(&BigInt::from(c.stride)) == BigInt::zero()
        })
    }

    /// Reconstructs `f(n)/g(n)` from the class expansion.
    pub fn value_at(&self, n: &BigInt) -> Option<BigRational> {
        self.class_for(n).and_then(|c| c.value_at(n))
    }
}

/// Expands `f/g` as a continued fraction by iterated generalized division;
/// residue classes refine whenever a division branches.
pub fn gcontfrac(f: &IntPoly, g: &IntPoly) -> Result<CFExpansion> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (gs, gt) = eventual_sign(g);
    if gs != Sign::Positive {
        return Err(Error::Domain(
            "continued fractions need an eventually positive denominator".to_string(),
        ));
    }
    struct Work {
        stride: u64,
        offset: u64,
        terms: Vec<IntPoly>,
        num: IntPoly,
        den: IntPoly,
        threshold: BigInt,
    }
    let mut work = vec![Work {
        stride: 1,
        offset: 0,
        terms: Vec::new(),
        num: f.clone(),
        den: g.clone(),
        threshold: gt,
    }];
    let mut done: Vec<CFClass> = Vec::new();
    while let Some(w) = work.pop() {
        if done.len() + work.len() > CF_CLASS_CAP {
            return Err(Error::CapExceeded("continued fraction classes".to_string()));
        }
        if w.terms.len() > CF_TERM_CAP {
            return Err(Error::CapExceeded("continued fraction length".to_string()));
        }
        let div = gdiv_poly(&w.num, &w.den)?;
        let t = div.branch_count;
        let new_stride = w
            .stride
            .checked_mul(t)
            .filter(|s| *s <= CF_STRIDE_CAP)
            .ok_or_else(|| Error::CapExceeded("continued fraction stride".to_string()))?;
        let t_big = BigInt::from(t);
        for i in 0..t {
            let i_big = BigInt::from(i);
            let mut terms: Vec<IntPoly> = w
                .terms
                .iter()
                .map(|p| p.compose_affine(&t_big, &i_big))
                .collect();
            terms.push(div.quotients[i as usize].clone());
            let rem = div.remainders[i as usize].clone();
            // Thresholds move to the refined variable u with s = t*u + i.
            let mut thr_u = (&w.threshold - &i_big).div_ceil(&t_big).max(BigInt::zero());
            let div_thr = (&div.threshold - &i_big).div_ceil(&t_big).max(BigInt::zero());
            max_assign(&mut thr_u, &div_thr);
            let offset = w.stride * i + w.offset;
            if rem.is_zero() {
                done.push(CFClass {
                    stride: new_stride,
                    offset,
                    terms,
                    threshold: BigInt::from(new_stride) * &thr_u + BigInt::from(offset),
                });
            } else {
                // The next division needs a positive remainder.
                let (_, rt) = eventual_sign(&rem);
                max_assign(&mut thr_u, &rt);
                work.push(Work {
                    stride: new_stride,
                    offset,
                    terms,
                    num: w.den.compose_affine(&t_big, &i_big),
                    den: rem,
                    threshold: thr_u,
                });
            }
        }
    }
    done.sort_by_key(|c| (c.stride, c.offset));
    Ok(CFExpansion { classes: done })
}

// ---------------------------------------------------------------------------
// Signed cone decomposition in dimension two
// ---------------------------------------------------------------------------

/// One signed piece of a cone decomposition: a unimodular closed cone, a ray
/// correction, or an origin correction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignedCone2D {
    Cone {
        gens: [[IntPoly; 2]; 2],
        sign: i32,
    },
    Ray {
        gen: [IntPoly; 2],
        coeff: BigInt,
    },
    Point {
        coeff: BigInt,
    },
}

/// Decomposition pieces on one residue class `n = stride*s + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeClass {
    pub stride: u64,
    pub offset: u64,
    pub pieces: Vec<SignedCone2D>,
    pub threshold: BigInt,
}

/// Signed unimodular decomposition of a two-dimensional cone, per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDecomposition {
    pub classes: Vec<ConeClass>,
}

/// Membership of a lattice point in the closed cone spanned by two
/// independent generators.
pub fn cone_contains(a: &[BigInt; 2], b: &[BigInt; 2], pt: &[BigInt; 2]) -> bool {
    let det = |p: &[BigInt; 2], q: &[BigInt; 2]| &p[0] * &q[1] - &p[1] * &q[0];
    let d = det(a, b);
    if d.is_zero() {
        return false;
    }
    let alpha = det(pt, b) * d.signum();
    let beta = det(a, pt) * d.signum();
    !alpha.is_negative() && !beta.is_negative()
}

/// Membership of a lattice point in the closed ray spanned by a generator.
pub fn ray_contains(gen: &[BigInt; 2], pt: &[BigInt; 2]) -> bool {
    if &gen[0] * &pt[1] != &gen[1] * &pt[0] {
        return false;
    }
    let dot = &gen[0] * &pt[0] + &gen[1] * &pt[1];
    !dot.is_negative()
}

impl ConeDecomposition {
    pub fn class_for(&self, n: &BigInt) -> Option<&ConeClass> {
        self.classes.iter().find(|c| {
            (n - BigInt::from(c.offset)).mod_floor(&BigInt::from(c.stride)) == BigInt::zero()
        })
    }

    /// Signed indicator value of the decomposition at one lattice point for
    /// one parameter value.
    pub fn indicator(&self, n: &BigInt, pt: &[BigInt; 2]) -> Option<BigInt> {
        let class = self.class_for(n)?;
        let s = (n - BigInt::from(class.offset)) / BigInt::from(class.stride);
        let mut total = BigInt::zero();
        for piece in &class.pieces {
            match piece {
                SignedCone2D::Cone { gens, sign } => {
                    let a = [gens[0][0].eval(&s), gens[0][1].eval(&s)];
                    let b = [gens[1][0].eval(&s), gens[1][1].eval(&s)];
                    if cone_contains(&a, &b, pt) {
                        total += BigInt::from(*sign);
                    }
                }
                SignedCone2D::Ray { gen, coeff } => {
                    let g = [gen[0].eval(&s), gen[1].eval(&s)];
                    if ray_contains(&g, pt) {
                        total += coeff;
                    }
                }
                SignedCone2D::Point { coeff } => {
                    if pt[0].is_zero() && pt[1].is_zero() {
                        total += coeff;
                    }
                }
            }
        }
        Some(total)
    }
}

fn const_vec(v: &[IntPoly; 2]) -> Option<[BigInt; 2]> {
    if v.iter().all(|p| p.degree().unwrap_or(0) == 0) {
        Some([v[0].coeff(0), v[1].coeff(0)])
    } else {
        None
    }
}

/// Decomposes `cone(u, v)` into signed unimodular cones with ray and origin
/// corrections, per residue class; one generator must be a constant
/// primitive vector.
pub fn decompose_cone_2d(u: &[IntPoly; 2], v: &[IntPoly; 2]) -> Result<ConeDecomposition> {
    let (cu, pv) = match (const_vec(u), const_vec(v)) {
        (Some(c), _) => (c, v.clone()),
        (None, Some(c)) => (c, u.clone()),
        (None, None) => {
            return Err(Error::Domain(
                "one generator must be constant".to_string(),
            ))
        }
    };
    if cu[0].is_zero() && cu[1].is_zero() {
        return Err(Error::Domain("zero generator".to_string()));
    }
    if cu[0].gcd(&cu[1]) != BigInt::one() {
        return Err(Error::Domain("constant generator is not primitive".to_string()));
    }
    // Dependence test: det(u, v) as a polynomial.
    let det_poly = &(&IntPoly::constant(cu[0].clone()) * &pv[1])
        - &(&IntPoly::constant(cu[1].clone()) * &pv[0]);
    if det_poly.is_zero() {
        return Err(Error::Domain("generators are eventually dependent".to_string()));
    }

    // Change coordinates so the constant generator becomes (1, 0): with
    // a u0 + b u1 = 1, T = [u, (-b, a)] is unimodular and T^{-1} v = (g, f).
    let e = cu[0].extended_gcd(&cu[1]);
    let (ca, cb) = (e.x, e.y);
    let g_p = &pv[0].scale(&ca) + &pv[1].scale(&cb);
    let f_p = &pv[1].scale(&cu[0]) - &pv[0].scale(&cu[1]);
    let to_world = move |p: &[IntPoly; 2]| -> [IntPoly; 2] {
        [
            &p[0].scale(&cu[0]) - &p[1].scale(&cb),
            &p[0].scale(&cu[1]) + &p[1].scale(&ca),
        ]
    };

    let (gs, gt) = eventual_sign(&g_p);
    let (fs, ft) = eventual_sign(&f_p);
    let mut thr = gt.max(ft);
    if fs == Sign::Negative || gs == Sign::Negative {
        return Err(Error::Domain(
            "cone leaves the transformed first quadrant".to_string(),
        ));
    }
    let x_axis = [IntPoly::one(), IntPoly::zero()];
    let y_axis = [IntPoly::zero(), IntPoly::one()];
    if gs == Sign::Zero {
        // v is a positive multiple of the second basis vector: the cone is
        // the transformed quadrant, already unimodular.
        return Ok(ConeDecomposition {
            classes: vec![ConeClass {
                stride: 1,
                offset: 0,
                pieces: vec![SignedCone2D::Cone {
                    gens: [to_world(&x_axis), to_world(&y_axis)],
                    sign: 1,
                }],
                threshold: thr,
            }],
        });
    }

    let cf = gcontfrac(&f_p, &g_p)?;
    let mut classes = Vec::with_capacity(cf.classes.len());
    for class in &cf.classes {
        max_assign(&mut thr, &class.threshold);
        let stride_big = BigInt::from(class.stride);
        let offset_big = BigInt::from(class.offset);
        let f_c = f_p.compose_affine(&stride_big, &offset_big);
        let g_c = g_p.compose_affine(&stride_big, &offset_big);
        // Convergent rays (q_j, p_j) of the slope f/g.
        let mut rays: Vec<[IntPoly; 2]> = vec![x_axis.clone(), y_axis.clone()];
        let (mut p_prev, mut p_cur) = (IntPoly::zero(), IntPoly::one());
        let (mut q_prev, mut q_cur) = (IntPoly::one(), IntPoly::zero());
        for a in &class.terms {
            let p_next = &(a * &p_cur) + &p_prev;
            let q_next = &(a * &q_cur) + &q_prev;
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = p_next;
            q_cur = q_next;
            rays.push([q_cur.clone(), p_cur.clone()]);
        }
        // Alternating closed cones along the convergent fan.
        let mut cones: Vec<([IntPoly; 2], [IntPoly; 2], i32)> = Vec::new();
        cones.push((x_axis.clone(), y_axis.clone(), 1));
        let mut sign = -1;
        for pair in rays[1..].windows(2) {
            cones.push((pair[0].clone(), pair[1].clone(), sign));
            sign = -sign;
        }
        // Net multiplicity of each distinct boundary ray against its target
        // membership, then an origin correction for the total.
        let mut distinct: Vec<[IntPoly; 2]> = Vec::new();
        for r in &rays {
            if !distinct.contains(r) {
                distinct.push(r.clone());
            }
        }
        let mut pieces: Vec<SignedCone2D> = cones
            .iter()
            .map(|(a, b, s)| SignedCone2D::Cone {
                gens: [to_world(a), to_world(b)],
                sign: *s,
            })
            .collect();
        let mut total = BigInt::zero();
        for (_, _, s) in &cones {
            total += BigInt::from(*s);
        }
        let pdet = |p: &[IntPoly; 2], q: &[IntPoly; 2]| &(&p[0] * &q[1]) - &(&p[1] * &q[0]);
        for ray in &distinct {
            // Net signed multiplicity of the ray across every cone whose
            // closure eventually contains it.
            let mut net: i64 = 0;
            for (a, b, s) in &cones {
                let (ds, dt) = eventual_sign(&pdet(a, b));
                let (als, alt) = eventual_sign(&pdet(ray, b));
                let (bes, bet) = eventual_sign(&pdet(a, ray));
                max_assign(&mut thr, &dt);
                max_assign(&mut thr, &alt);
                max_assign(&mut thr, &bet);
                let ok = |e: Sign| e == Sign::Zero || e == ds;
                if ok(als) && ok(bes) {
                    net += i64::from(*s);
                }
            }
            // Inside the target cone: nonnegative height and on the target
            // side of v.
            let (hs, ht) = eventual_sign(&ray[1]);
            let cross = &(&ray[0] * &f_c) - &(&ray[1] * &g_c);
            let (cs, ct) = eventual_sign(&cross);
            max_assign(&mut thr, &ht);
            max_assign(&mut thr, &ct);
            let desired = i64::from(hs != Sign::Negative && cs != Sign::Negative);
            let coeff = BigInt::from(desired - net);
            if !coeff.is_zero() {
                total += &coeff;
                pieces.push(SignedCone2D::Ray {
                    gen: to_world(ray),
                    coeff,
                });
            }
        }
        let origin = BigInt::one() - &total;
        if !origin.is_zero() {
            pieces.push(SignedCone2D::Point { coeff: origin });
        }
        classes.push(ConeClass {
            stride: class.stride,
            offset: class.offset,
            pieces,
            threshold: thr.clone(),
        });
    }
    Ok(ConeDecomposition { classes })
}
