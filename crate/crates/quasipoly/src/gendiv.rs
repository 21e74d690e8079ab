//! Generalized division, gcd and Bezout certificates.
//!
//! For integer polynomials `f`, `g` the integer quotient `floor(f(n)/g(n))`
//! and remainder are not polynomials, but they become integer polynomials
//! after splitting `n` into finitely many residue classes. [`gdiv_poly`]
//! computes that splitting; [`gdiv_eqp`] lifts it to eventually
//! quasi-polynomial operands; on top of these sit pointwise gcds, Bezout
//! certificates, modular inverses and exact pointwise division, all as
//! [`EventualQP`] values with explicit thresholds.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eqp::EventualQP;
use crate::error::{Error, Result};
use num_rational::BigRational;

use crate::polyring::{eventual_sign, int_from_q, IntPoly, QPoly, Sign};

/// Most branches any single division is allowed to produce.
const BRANCH_CAP: u64 = 1 << 20;

/// Largest per-class period a gcd computation may introduce.
const PERIOD_CAP: u64 = 1 << 20;

/// Branched quotient and remainder: for `n = Tm + i` past the threshold,
/// `f(n) = quotients[i](m) * g(n) + remainders[i](m)` with
/// `0 <= remainders[i](m) < |g(n)|`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GDivResult {
    pub branch_count: u64,
    pub quotients: Vec<IntPoly>,
    pub remainders: Vec<IntPoly>,
    pub threshold: BigInt,
}

impl GDivResult {
    /// The quotient and remainder as quasi-polynomial functions of `n`.
    pub fn to_eqps(&self) -> (EventualQP, EventualQP) {
        let quot_classes: Vec<EventualQP> =
            self.quotients.iter().map(EventualQP::from_poly).collect();
        let rem_classes: Vec<EventualQP> =
            self.remainders.iter().map(EventualQP::from_poly).collect();
        let quot = EventualQP::from_class_functions(self.branch_count, &quot_classes)
            .with_threshold(self.threshold.clone());
        let rem = EventualQP::from_class_functions(self.branch_count, &rem_classes)
            .with_threshold(self.threshold.clone());
        (quot, rem)
    }
}

impl fmt::Display for GDivResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branches: {}, threshold: n >= {}", self.branch_count, self.threshold)?;
        for i in 0..self.branch_count as usize {
            writeln!(
                f,
                "class {i} (mod {}): quotient {}, remainder {}",
                self.branch_count,
                self.quotients[i].display_with_var("m"),
                self.remainders[i].display_with_var("m"),
            )?;
        }
        Ok(())
    }
}

/// Generalized division of `f` by `g` over `Z[x]`.
///
/// The quotient convention is `f = q*g + r` with `0 <= r < |g|`, which is
/// floor division for eventually positive `g` and ceiling division for
/// eventually negative `g`.
pub fn gdiv_poly(f: &IntPoly, g: &IntPoly) -> Result<GDivResult> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if g.leading_coeff().map_or(false, |c| c.is_negative()) {
        let mut res = gdiv_poly(f, &-g)?;
        for p in &mut res.quotients {
            *p = -&*p;
        }
        return Ok(res);
    }
    let k = match f.degree() {
        None => {
            // f = 0: quotient and remainder 0 wherever g(n) > 0.
            let (s, thr) = eventual_sign(g);
            debug_assert_eq!(s, Sign::Positive);
            return Ok(GDivResult {
                branch_count: 1,
                quotients: alloc::vec![IntPoly::zero()],
                remainders: alloc::vec![IntPoly::zero()],
                threshold: thr,
            });
        }
        Some(k) => k,
    };
    let l = g.degree().expect("nonzero divisor");
    if k < l {
        let (p, r) = if f.leading_coeff().map_or(false, |c| c.is_positive()) {
            (IntPoly::zero(), f.clone())
        } else {
            (IntPoly::constant_i64(-1), f + g)
        };
        let threshold = remainder_threshold(&r, g);
        return Ok(GDivResult {
            branch_count: 1,
            quotients: alloc::vec![p],
            remainders: alloc::vec![r],
            threshold,
        });
    }
    let bl = g.leading_coeff().expect("nonzero divisor").clone();
    let t_big = bl.pow((k - l) as u32);
    let t = t_big
        .to_u64()
        .filter(|t| *t <= BRANCH_CAP)
        .ok_or_else(|| Error::CapExceeded(format!("branch count {t_big} for division")))?;
    let lead_div = &bl * t_big.pow(l as u32);
    let mut quotients = Vec::with_capacity(t as usize);
    let mut remainders = Vec::with_capacity(t as usize);
    let mut threshold = BigInt::zero();
    for i in 0..t {
        let tb = BigInt::from(t);
        let ib = BigInt::from(i);
        let mut r = f.compose_affine(&tb, &ib);
        let gt = g.compose_affine(&tb, &ib);
        let mut p = IntPoly::zero();
        while r.degree().map_or(false, |d| d > l) {
            let d = r.degree().unwrap();
            let (h, rem) = r.leading_coeff().unwrap().div_rem(&lead_div);
            if !rem.is_zero() {
                return Err(Error::Internal(format!(
                    "non-integer quotient coefficient dividing {f} by {g}"
                )));
            }
            let h = IntPoly::monomial(h, d - l);
            r = &r - &(&h * &gt);
            p = &p + &h;
        }
        while r.degree() == Some(l) {
            let c = r.leading_coeff().unwrap().div_floor(&lead_div);
            if c.is_zero() {
                break;
            }
            p = &p + &IntPoly::constant(c.clone());
            r = &r - &(&IntPoly::constant(c) * &gt);
        }
        if r.leading_coeff().map_or(false, |c| c.is_negative()) {
            r = &r + &gt;
            p = &p - &IntPoly::one();
        }
        let m_thr = remainder_threshold(&r, &gt);
        let n_thr = BigInt::from(t) * m_thr + BigInt::from(i);
        if n_thr > threshold {
            threshold = n_thr;
        }
        quotients.push(p);
        remainders.push(r);
    }
    Ok(GDivResult {
        branch_count: t,
        quotients,
        remainders,
        threshold,
    })
}

/// Least argument past which `0 <= r < g` is certain.
fn remainder_threshold(r: &IntPoly, g: &IntPoly) -> BigInt {
    let (s_r, t_r) = eventual_sign(r);
    debug_assert!(s_r != Sign::Negative);
    let (s_d, t_d) = eventual_sign(&(g - r));
    debug_assert_eq!(s_d, Sign::Positive);
    t_r.max(t_d)
}

/// A common period and integer shifted constituents for a pair of
/// quasi-polynomials.
pub(crate) fn common_shifted(f: &EventualQP, g: &EventualQP) -> (u64, Vec<IntPoly>, Vec<IntPoly>) {
    let (tf, _) = f.integer_shifted_form();
    let (tg, _) = g.integer_shifted_form();
    let t = tf.lcm(&tg);
    let f = f.refine(t).expect("common multiple");
    let g = g.refine(t).expect("common multiple");
    let shifted = |h: &EventualQP| -> Vec<IntPoly> {
        (0..t)
            .map(|i| {
                crate::polyring::int_from_q(&h.shifted(i))
                    .expect("integer coefficients at a common multiple of both strides")
            })
            .collect()
    };
    (t, shifted(&f), shifted(&g))
}

/// Rebuilds the `n`-level function from per-class functions, then applies
/// each class's validity threshold on the shifted variable.
fn assemble(stride: u64, classes: &[EventualQP]) -> EventualQP {
    EventualQP::from_class_functions(stride, classes)
}

/// Generalized division over quasi-polynomials: `f = quot*g + rem` with
/// `0 <= rem(n) < |g(n)|` for `n` past the result thresholds.
pub fn gdiv_eqp(f: &EventualQP, g: &EventualQP) -> Result<(EventualQP, EventualQP)> {
    let (t0, fs, gs) = common_shifted(f, g);
    let mut quot_classes = Vec::with_capacity(t0 as usize);
    let mut rem_classes = Vec::with_capacity(t0 as usize);
    for i in 0..t0 {
        if gs[i as usize].is_zero() {
            return Err(Error::ZeroConstituent { class: i, period: t0 });
        }
        let div = gdiv_poly(&fs[i as usize], &gs[i as usize])?;
        let (q, r) = div.to_eqps();
        // Also honor the operands' own thresholds on this class.
        let op_thr = f
            .shifted_threshold(t0, i)
            .max(g.shifted_threshold(t0, i));
        quot_classes.push(q.max_threshold(&op_thr));
        rem_classes.push(r.max_threshold(&op_thr));
    }
    Ok((assemble(t0, &quot_classes), assemble(t0, &rem_classes)))
}

/// Quotient of a pointwise-exact division, or `None` when `d` does not
/// divide `a` pointwise on every residue class.
///
/// Pointwise divisibility on a class forces the shifted constituents to
/// divide exactly as polynomials with an integer-valued quotient: the
/// proper-fraction part of the rational quotient tends to zero yet takes
/// values in a fixed discrete subgroup, so it vanishes identically. This
/// avoids the residue splitting of [`gdiv_eqp`] entirely.
pub fn try_exact_div_eqp(a: &EventualQP, d: &EventualQP) -> Option<EventualQP> {
    if a.is_zero() {
        return Some(EventualQP::zero());
    }
    if d.is_zero() {
        return None;
    }
    let (t, fs, gs) = common_shifted(a, d);
    let mut classes = Vec::with_capacity(t as usize);
    for i in 0..t {
        let (fi, gi) = (&fs[i as usize], &gs[i as usize]);
        if gi.is_zero() {
            if fi.is_zero() {
                classes.push(EventualQP::zero());
                continue;
            }
            return None;
        }
        let q = fi.to_q().exact_div(&gi.to_q())?;
        let thr = a.shifted_threshold(t, i).max(d.shifted_threshold(t, i));
        match EventualQP::new(1, vec![q], thr) {
            Ok(e) => classes.push(e),
            Err(_) => return None,
        }
    }
    Some(EventualQP::from_class_functions(t, &classes))
}

/// Pointwise gcd of `f(n)` and `g(n)` as a quasi-polynomial.
pub fn ggcd(f: &EventualQP, g: &EventualQP) -> Result<EventualQP> {
    Ok(gbezout(f, g)?.0)
}

/// `d = gcd(f(n), g(n))` with certificates `u`, `v` satisfying
/// `u*f + v*g = d` pointwise past the thresholds.
pub fn gbezout(f: &EventualQP, g: &EventualQP) -> Result<(EventualQP, EventualQP, EventualQP)> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::Domain("gcd of two zero functions".to_string()));
    }
    let (t0, fs, gs) = common_shifted(f, g);
    let mut d_classes = Vec::with_capacity(t0 as usize);
    let mut u_classes = Vec::with_capacity(t0 as usize);
    let mut v_classes = Vec::with_capacity(t0 as usize);
    for i in 0..t0 {
        let (d, u, v) = bezout_class(&fs[i as usize], &gs[i as usize])?;
        let op_thr = f
            .shifted_threshold(t0, i)
            .max(g.shifted_threshold(t0, i));
        d_classes.push(d.max_threshold(&op_thr));
        u_classes.push(u.max_threshold(&op_thr));
        v_classes.push(v.max_threshold(&op_thr));
    }
    Ok((
        assemble(t0, &d_classes),
        assemble(t0, &u_classes),
        assemble(t0, &v_classes),
    ))
}

/// Extended Euclid in `Q[x]`: returns `(gcd, u, v)` with `u a + v b = gcd`.
fn ext_bezout_q(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
        r0 = r1;
        r1 = r;
        let s = &s0 - &(&q * &s1);
        s0 = s1;
        s1 = s;
        let t = &t0 - &(&q * &t1);
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

/// Pointwise Bezout data on one residue class. The inputs are integer
/// polynomials in the class's shifted variable; all three returns are
/// functions of that variable with `u*f + v*g = d = gcd(f, g)` pointwise.
///
/// Writing `f = h f'`, `g = h g'` with `h` the polynomial gcd, the coprime
/// parts satisfy an integer identity `U f' + V g' = R` with `R` a positive
/// integer, so `gcd(f'(m), g'(m))` divides `R` everywhere and equals the
/// constant `gcd(f'(c), g'(c), R)` on each class `c` modulo `R`.
fn bezout_class(f: &IntPoly, g: &IntPoly) -> Result<(EventualQP, EventualQP, EventualQP)> {
    if g.is_zero() || f.is_zero() {
        let (h, swap) = if g.is_zero() { (f, false) } else { (g, true) };
        let (sign, thr) = eventual_sign(h);
        let unit = match sign {
            Sign::Zero => return Ok((EventualQP::zero(), EventualQP::one(), EventualQP::zero())),
            Sign::Positive => EventualQP::one(),
            Sign::Negative => EventualQP::from_int(-1),
        };
        let d = EventualQP::from_poly(h).mul(&unit).max_threshold(&thr);
        return Ok(if swap {
            (d, EventualQP::zero(), unit)
        } else {
            (d, unit, EventualQP::zero())
        });
    }
    let h = f.gcd_poly(g);
    let fp = f.exact_div(&h).ok_or_else(|| Error::Internal("gcd must divide".to_string()))?;
    let gp = g.exact_div(&h).ok_or_else(|| Error::Internal("gcd must divide".to_string()))?;
    let (c0, u0, v0) = ext_bezout_q(&fp.to_q(), &gp.to_q());
    if c0.degree() != Some(0) {
        return Err(Error::Internal("coprime parts share a factor".to_string()));
    }
    let c0 = c0.coeff(0);
    let u0 = u0.map(|x| x / c0.clone());
    let v0 = v0.map(|x| x / c0.clone());
    // Clear denominators: U f' + V g' = R with integer U, V and R > 0.
    let mut r_mod = BigInt::one();
    for c in u0.coeffs().iter().chain(v0.coeffs()) {
        r_mod = r_mod.lcm(c.denom());
    }
    let big_u = int_from_q(&u0.map(|x| x * BigRational::from_integer(r_mod.clone())))
        .expect("denominators cleared");
    let big_v = int_from_q(&v0.map(|x| x * BigRational::from_integer(r_mod.clone())))
        .expect("denominators cleared");
    let r = r_mod
        .to_u64()
        .filter(|r| *r <= PERIOD_CAP)
        .ok_or_else(|| Error::CapExceeded(format!("gcd period {r_mod}")))?;
    let (h_sign, h_thr) = eventual_sign(&h);
    debug_assert!(h_sign != Sign::Zero);
    let h_unit = BigInt::from(h_sign.to_i32());
    let mut d_classes = Vec::with_capacity(r as usize);
    let mut u_classes = Vec::with_capacity(r as usize);
    let mut v_classes = Vec::with_capacity(r as usize);
    for c in 0..r {
        let rb = BigInt::from(r);
        let cb = BigInt::from(c);
        let fpc = fp.eval(&cb);
        let gpc = gp.eval(&cb);
        // delta = gcd(f'(c), g'(c), R) with a certificate
        // x f'(c) + y g'(c) + w R = delta.
        let e = fpc.extended_gcd(&gpc);
        let e2 = e.gcd.extended_gcd(&rb);
        let delta = e2.gcd.clone();
        let x = &e2.x * &e.x;
        let y = &e2.x * &e.y;
        // Shift to the class variable: m = R s + c.
        let fps = fp.compose_affine(&rb, &cb);
        let gps = gp.compose_affine(&rb, &cb);
        let combo = &(&IntPoly::constant(x.clone()) * &fps)
            + &(&IntPoly::constant(y.clone()) * &gps);
        let k = (&combo - &IntPoly::constant(delta.clone()))
            .exact_div_scalar(&rb)
            .ok_or_else(|| Error::Internal("carry polynomial must be divisible".to_string()))?;
        let us = big_u.compose_affine(&rb, &cb);
        let vs = big_v.compose_affine(&rb, &cb);
        let u = &IntPoly::constant(x) - &(&k * &us);
        let v = &IntPoly::constant(y) - &(&k * &vs);
        let hs = h.compose_affine(&rb, &cb);
        let d = &(&hs * &IntPoly::constant(delta)) * &IntPoly::constant(h_unit.clone());
        // Certificates are stated against f = h f', g = h g':
        // (sgn(h) u) f + (sgn(h) v) g = |h| delta.
        let u = &u * &IntPoly::constant(h_unit.clone());
        let v = &v * &IntPoly::constant(h_unit.clone());
        let s_thr = {
            let diff = &h_thr - &cb;
            if diff.is_positive() {
                diff.div_ceil(&rb)
            } else {
                BigInt::zero()
            }
        };
        d_classes.push(EventualQP::from_poly(&d).max_threshold(&s_thr));
        u_classes.push(EventualQP::from_poly(&u).max_threshold(&s_thr));
        v_classes.push(EventualQP::from_poly(&v).max_threshold(&s_thr));
    }
    Ok((
        assemble(r, &d_classes),
        assemble(r, &u_classes),
        assemble(r, &v_classes),
    ))
}

/// Pointwise gcd of a family, with certificates `us` satisfying
/// `sum f_i*u_i = d` and `ggcd(us) = 1`.
pub fn ggcd_many(fs: &[EventualQP]) -> Result<(EventualQP, Vec<EventualQP>)> {
    if fs.is_empty() || fs.iter().all(EventualQP::is_zero) {
        return Err(Error::Domain("gcd of an empty or all-zero family".to_string()));
    }
    let mut d = EventualQP::zero();
    let mut us: Vec<EventualQP> = Vec::with_capacity(fs.len());
    for f in fs {
        if f.is_zero() && d.is_zero() {
            us.push(EventualQP::zero());
            continue;
        }
        let (d2, a, b) = gbezout(&d, f)?;
        for u in &mut us {
            *u = u.mul(&a);
        }
        us.push(b);
        d = d2;
    }
    Ok((d, us))
}

/// Inverse of `a` modulo `b`, normalized into `[0, |b(n)|)`.
pub fn gmod_inverse(a: &EventualQP, b: &EventualQP) -> Result<EventualQP> {
    let (d, u, _) = gbezout(a, b)?;
    if !d.eq_eventually(&EventualQP::one()) {
        let c = d.canonicalize();
        let class = (0..c.period())
            .find(|i| c.constituent(*i) != &crate::polyring::QPoly::one())
            .unwrap_or(0);
        return Err(Error::NotCoprime {
            class,
            period: c.period(),
        });
    }
    let (_, r) = gdiv_eqp(&u, b)?;
    Ok(r.max_threshold(d.threshold()))
}
