//! Counting pipeline for parametric lattice-point problems.
//!
//! A `ParamSystem` asks for the number of nonnegative integer solutions of
//! `A(n) x = b(n)` with polynomial entries.  `reduce_to_linear` rewrites it,
//! via base-`n` digits of the variables and explicit carry ranges, into
//! finitely many `LinearSystem`s whose constraints have constant coefficient
//! forms.  `count_linear_system` counts such a system recursively: equality
//! constraints are eliminated lattice-exactly through Bezout/kernel data,
//! inequalities with a constant offset split into an offset-free system plus
//! equality slices, and the offset-free base case is a dilation of a fixed
//! rational polytope handled by `ehrhart_dilation`.  The entry points
//! `count_diophantine`, `count_hrep`, `count_vrep`, and `count_via_snf` tie
//! the pieces together.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eqp::EventualQP;
use crate::error::{Error, Result};
use crate::gendiv::gdiv_poly;
use crate::gsnf::{gsnf, EqpMatrix};
use crate::oracle;
use crate::paramgeo::{h_to_v, is_eventually_bounded, v_to_h, HRep, ParamPolytope, VRep};
use crate::polyring::{
    base_n_repr, eventual_compare, eventual_sign, eventual_sign_q, int_from_q, IntPoly, RatFunc,
    Sign,
};

/// Node budget for the linear-system recursion.
const LS_FUEL: i64 = 2_000_000;
/// Cap on the number of emitted carry systems.
const CARRY_CAP: usize = 100_000;
/// Cap on the offset magnitude split into equality slices.
const SLICE_CAP: i64 = 10_000;
/// Enumeration cap for the dilation base case samples.
const DILATION_CAP: u64 = 50_000_000;

fn max_assign(acc: &mut BigInt, t: &BigInt) {
    if t > acc {
        acc.clone_from(t);
    }
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Parametric Diophantine system `A(n) x = b(n)`, `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSystem {
    a: Vec<Vec<IntPoly>>,
    b: Vec<IntPoly>,
}

impl ParamSystem {
    pub fn new(a: Vec<Vec<IntPoly>>, b: Vec<IntPoly>) -> Result<ParamSystem> {
        if a.len() != b.len() {
            return Err(Error::Domain("matrix and right side size mismatch".to_string()));
        }
        let width = a.first().map_or(0, Vec::len);
        if a.iter().any(|row| row.len() != width) {
            return Err(Error::Domain("ragged coefficient matrix".to_string()));
        }
        Ok(ParamSystem { a, b })
    }

    pub fn matrix(&self) -> &[Vec<IntPoly>] {
        &self.a
    }

    pub fn rhs(&self) -> &[IntPoly] {
        &self.b
    }

    pub fn equations(&self) -> usize {
        self.a.len()
    }

    pub fn vars(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    /// Concrete instance `(A(n), b(n))` at one parameter value.
    pub fn eval(&self, n: &BigInt) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let a = self
            .a
            .iter()
            .map(|row| row.iter().map(|p| p.eval(n)).collect())
            .collect();
        let b = self.b.iter().map(|p| p.eval(n)).collect();
        (a, b)
    }
}

/// One constraint `slope*n + offset (= or <=) form . x` with a constant
/// integer coefficient form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinConstraint {
    pub slope: BigInt,
    pub offset: BigInt,
    pub form: Vec<BigInt>,
    pub is_eq: bool,
}

impl LinConstraint {
    pub fn eq(slope: i64, offset: i64, form: &[i64]) -> LinConstraint {
        LinConstraint {
            slope: BigInt::from(slope),
            offset: BigInt::from(offset),
            form: form.iter().map(|&c| BigInt::from(c)).collect(),
            is_eq: true,
        }
    }

    pub fn le(slope: i64, offset: i64, form: &[i64]) -> LinConstraint {
        LinConstraint {
            is_eq: false,
            ..LinConstraint::eq(slope, offset, form)
        }
    }

    fn form_is_zero(&self) -> bool {
        self.form.iter().all(Zero::is_zero)
    }

    /// Checks `slope*n + offset (=,<=) form . x` at a concrete point.
    pub fn holds(&self, n: &BigInt, x: &[BigInt]) -> bool {
        let lhs = &self.slope * n + &self.offset;
        let rhs: BigInt = self.form.iter().zip(x).map(|(c, v)| c * v).sum();
        if self.is_eq {
            lhs == rhs
        } else {
            lhs <= rhs
        }
    }
}

/// Finitely many constant-form constraints on integer variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub vars: usize,
    pub constraints: Vec<LinConstraint>,
}

impl LinearSystem {
    pub fn new(vars: usize, constraints: Vec<LinConstraint>) -> Result<LinearSystem> {
        if constraints.iter().any(|c| c.form.len() != vars) {
            return Err(Error::Domain("constraint arity mismatch".to_string()));
        }
        Ok(LinearSystem { vars, constraints })
    }

    /// Box bounds `0 <= x_v <= n-1` as a pair of constraints.
    fn push_box_bounds(constraints: &mut Vec<LinConstraint>, vars: usize, v: usize) {
        let mut lower = vec![BigInt::zero(); vars];
        lower[v] = BigInt::one();
        constraints.push(LinConstraint {
            slope: BigInt::zero(),
            offset: BigInt::zero(),
            form: lower,
            is_eq: false,
        });
        let mut upper = vec![BigInt::zero(); vars];
        upper[v] = -BigInt::one();
        constraints.push(LinConstraint {
            slope: -BigInt::one(),
            offset: BigInt::one(),
            form: upper,
            is_eq: false,
        });
    }
}

/// Digit/carry expansion of a `ParamSystem`: per-variable digit counts,
/// per-equation carry ranges, and one `LinearSystem` per surviving carry
/// tuple.
#[derive(Debug, Clone)]
pub struct CarryExpansion {
    /// Highest digit index per original variable (variable `j` gets digits
    /// `x_{j,0}..x_{j,digit_counts[j]}`).
    pub digit_counts: Vec<usize>,
    /// Per equation, the inclusive carry range at each interior level.
    pub carry_ranges: Vec<Vec<(BigInt, BigInt)>>,
    /// Surviving carry tuples (all equations' carries concatenated) with
    /// their digit systems.
    pub systems: Vec<(Vec<BigInt>, LinearSystem)>,
    /// Parameter bound above which the expansion is a bijection.
    pub threshold: BigInt,
}

impl CarryExpansion {
    /// Digit-variable index of `x_{j,p}`.
    pub fn var_index(&self, j: usize, p: usize) -> usize {
        self.digit_counts[..j].iter().map(|&c| c + 1).sum::<usize>() + p
    }
}

// ---------------------------------------------------------------------------
// Digit/carry reduction
// ---------------------------------------------------------------------------

/// Negates equations whose right side is eventually negative, so every right
/// side is eventually nonnegative; returns the adjusted system and a sign
/// threshold.
fn normalize_rhs(sys: &ParamSystem) -> (ParamSystem, BigInt) {
    let mut thr = BigInt::one();
    let mut a = sys.a.clone();
    let mut b = sys.b.clone();
    for i in 0..b.len() {
        let (sign, t) = eventual_sign(&b[i]);
        max_assign(&mut thr, &t);
        if sign == Sign::Negative {
            a[i] = a[i].iter().map(|p| -p).collect();
            b[i] = -&b[i];
        }
    }
    (ParamSystem { a, b }, thr)
}

/// Rewrites `A(n) x = b(n)`, `x >= 0` into digit systems with explicit
/// carries, assuming every solution coordinate is below `n^(n_bound+1)`
/// eventually.
pub fn reduce_to_linear(sys: &ParamSystem, n_bound: usize) -> Result<CarryExpansion> {
    let (sys, mut thr) = normalize_rhs(sys);
    let k = sys.vars();

    // Per-variable digit counts: an equation with eventually nonnegative
    // coefficients and right side bounds x_j by b/a_j, so its digits stop at
    // deg b - deg a_j.
    let mut digit_counts = vec![n_bound; k];
    for i in 0..sys.equations() {
        let all_nonneg = sys.a[i].iter().all(|p| {
            let (s, _) = eventual_sign(p);
            s != Sign::Negative
        });
        let (bs, bt) = eventual_sign(&sys.b[i]);
        if !all_nonneg || bs == Sign::Negative {
            continue;
        }
        max_assign(&mut thr, &bt);
        let db = sys.b[i].degree().map_or(0, |d| d as isize);
        for j in 0..k {
            if sys.a[i][j].is_zero() {
                continue;
            }
            let da = sys.a[i][j].degree().unwrap() as isize;
            let cand = (db - da).max(0) as usize;
            if cand < digit_counts[j] {
                digit_counts[j] = cand;
            }
            // x_j <= b/a_j < n^(cand+1) from some point on.
            let ratio = RatFunc::new(sys.b[i].clone(), sys.a[i][j].clone())?;
            let power = RatFunc::from_poly(IntPoly::monomial(BigInt::one(), cand + 1));
            let (_, ct) = eventual_compare(&ratio, &power);
            max_assign(&mut thr, &ct);
        }
    }

    let offsets: Vec<usize> = (0..k)
        .map(|j| digit_counts[..j].iter().map(|&c| c + 1).sum())
        .collect();
    let vars: usize = digit_counts.iter().map(|&c| c + 1).sum();

    // Per equation: level forms, right-side digits, and carry ranges.
    struct Level {
        form: Vec<BigInt>,
        digit_slope: BigInt,
        digit_intercept: BigInt,
    }
    let mut eq_levels: Vec<Vec<Level>> = Vec::new();
    let mut carry_ranges: Vec<Vec<(BigInt, BigInt)>> = Vec::new();
    for i in 0..sys.equations() {
        let digits = if sys.b[i].is_zero() {
            Vec::new()
        } else {
            let repr = base_n_repr(&sys.b[i])?;
            max_assign(&mut thr, &repr.threshold);
            repr.digits
        };
        let mut prod_top = 0usize;
        for j in 0..k {
            if let Some(d) = sys.a[i][j].degree() {
                prod_top = prod_top.max(d + digit_counts[j]);
            }
        }
        let levels = (prod_top + 1).max(digits.len()).max(1);
        let mut lv = Vec::with_capacity(levels);
        for p in 0..levels {
            let mut form = vec![BigInt::zero(); vars];
            for j in 0..k {
                for l in 0..=p.min(sys.a[i][j].degree().unwrap_or(0)) {
                    let c = sys.a[i][j].coeff(l);
                    if c.is_zero() || p - l > digit_counts[j] {
                        continue;
                    }
                    form[offsets[j] + (p - l)] += c;
                }
            }
            let (ds, di) = digits
                .get(p)
                .map_or((BigInt::zero(), BigInt::zero()), |d| {
                    (d.slope.clone(), d.intercept.clone())
                });
            lv.push(Level {
                form,
                digit_slope: ds,
                digit_intercept: di,
            });
        }
        // Carry out of level p, for p = 0..levels-2; the top level's carry
        // out is forced to zero by the exact total balance.
        let mut ranges = Vec::new();
        let mut prev = (BigInt::zero(), BigInt::zero());
        for lvl in lv.iter().take(levels - 1) {
            let pos: BigInt = lvl.form.iter().filter(|c| c.is_positive()).cloned().sum();
            let neg: BigInt = lvl.form.iter().filter(|c| c.is_negative()).cloned().sum();
            let mut up = &pos - BigInt::one();
            if prev.1.is_positive() {
                up += 1;
            }
            if up.is_negative() {
                up = BigInt::zero();
            }
            let mut lo = neg.clone();
            if prev.0.is_negative() {
                lo -= 1;
            }
            if lo.is_positive() {
                lo = BigInt::zero();
            }
            // The range derivation needs n to dominate the incoming carry.
            max_assign(&mut thr, &(prev.1.abs() + 1));
            max_assign(&mut thr, &(prev.0.abs() + 1));
            prev = (lo.clone(), up.clone());
            ranges.push((lo, up));
        }
        eq_levels.push(lv);
        carry_ranges.push(ranges);
    }

    // Enumerate carry tuples per equation, pruning levels that are provably
    // eventually infeasible, then take the product across equations.
    let mut per_eq: Vec<Vec<(Vec<BigInt>, Vec<LinConstraint>)>> = Vec::new();
    for (lv, ranges) in eq_levels.iter().zip(&carry_ranges) {
        let mut out: Vec<(Vec<BigInt>, Vec<LinConstraint>)> = Vec::new();
        let mut stack: Vec<(Vec<BigInt>, Vec<LinConstraint>)> =
            vec![(Vec::new(), Vec::new())];
        for (p, level) in lv.iter().enumerate() {
            let choices: Vec<BigInt> = if p < ranges.len() {
                let (lo, up) = &ranges[p];
                let mut cs = Vec::new();
                let mut c = lo.clone();
                while &c <= up {
                    cs.push(c.clone());
                    c += 1;
                }
                cs
            } else {
                vec![BigInt::zero()]
            };
            let mut next = Vec::new();
            for (carries, constraints) in &stack {
                let carry_in = if p == 0 {
                    BigInt::zero()
                } else {
                    carries[p - 1].clone()
                };
                for c_out in &choices {
                    let slope = &level.digit_slope + c_out;
                    let offset = &level.digit_intercept - &carry_in;
                    let con = LinConstraint {
                        slope,
                        offset,
                        form: level.form.clone(),
                        is_eq: true,
                    };
                    match infeasibility_threshold(&con) {
                        Some(t) => {
                            max_assign(&mut thr, &t);
                        }
                        None => {
                            let mut cs = carries.clone();
                            if p < ranges.len() {
                                cs.push(c_out.clone());
                            }
                            let mut con_list = constraints.clone();
                            con_list.push(con);
                            next.push((cs, con_list));
                        }
                    }
                    if next.len() > CARRY_CAP {
                        return Err(Error::CapExceeded(
                            "carry tuple enumeration".to_string(),
                        ));
                    }
                }
            }
            stack = next;
        }
        out.extend(stack);
        per_eq.push(out);
    }

    let mut systems: Vec<(Vec<BigInt>, LinearSystem)> = Vec::new();
    let mut box_constraints = Vec::new();
    for v in 0..vars {
        LinearSystem::push_box_bounds(&mut box_constraints, vars, v);
    }
    let mut partial: Vec<(Vec<BigInt>, Vec<LinConstraint>)> =
        vec![(Vec::new(), box_constraints)];
    for eq_choices in &per_eq {
        let mut next = Vec::new();
        for (tuple, cons) in &partial {
            for (eq_tuple, eq_cons) in eq_choices {
                let mut t = tuple.clone();
                t.extend(eq_tuple.iter().cloned());
                let mut c = cons.clone();
                c.extend(eq_cons.iter().cloned());
                next.push((t, c));
                if next.len() > CARRY_CAP {
                    return Err(Error::CapExceeded("carry tuple enumeration".to_string()));
                }
            }
        }
        partial = next;
    }
    for (tuple, cons) in partial {
        systems.push((tuple, LinearSystem::new(vars, cons)?));
    }

    Ok(CarryExpansion {
        digit_counts,
        carry_ranges,
        systems,
        threshold: thr,
    })
}

/// If the constraint is provably infeasible for all large `n` (with digits in
/// `[0, n-1]`), returns a parameter bound past which it has no solutions.
fn infeasibility_threshold(c: &LinConstraint) -> Option<BigInt> {
    let pos: BigInt = c.form.iter().filter(|v| v.is_positive()).cloned().sum();
    let neg: BigInt = c.form.iter().filter(|v| v.is_negative()).cloned().sum();
    // Value range of the form is [neg*(n-1), pos*(n-1)].
    if c.slope > pos || (c.slope == pos && c.offset > -&pos) {
        // The left side eventually exceeds the largest reachable value.
        return Some(threshold_beyond(&c.slope, &c.offset, &pos));
    }
    if c.is_eq && (c.slope < neg || (c.slope == neg && c.offset < -&neg)) {
        // The left side eventually undershoots the smallest reachable value:
        // need n(neg - slope) > offset + neg.
        let t = if c.slope < neg {
            let num = &c.offset + &neg;
            let den = &neg - &c.slope;
            let t = Integer::div_floor(&num, &den) + BigInt::one();
            if t < BigInt::one() {
                BigInt::one()
            } else {
                t
            }
        } else {
            BigInt::one()
        };
        return Some(t);
    }
    None
}

/// Least `n0 >= 1` with `s*n + o > p*n - p` for all `n >= n0`, given
/// `s > p`, or `s = p` with `o > -p`.
fn threshold_beyond(s: &BigInt, o: &BigInt, p: &BigInt) -> BigInt {
    if s > p {
        // n(s - p) > -p - o.
        let num = -p - o;
        let den = s - p;
        let mut t = Integer::div_floor(&num, &den) + BigInt::one();
        if t < BigInt::one() {
            t = BigInt::one();
        }
        t
    } else {
        BigInt::one()
    }
}

// ---------------------------------------------------------------------------
// Recursive counting of linear systems
// ---------------------------------------------------------------------------

/// Counts integer solutions of a constant-form system as a function of `n`.
pub fn count_linear_system(sys: &LinearSystem) -> Result<EventualQP> {
    let mut fuel = LS_FUEL;
    count_ls(sys, &mut fuel)
}

fn count_ls(sys: &LinearSystem, fuel: &mut i64) -> Result<EventualQP> {
    *fuel -= 1;
    if *fuel < 0 {
        return Err(Error::FuelExhausted("linear system recursion".to_string()));
    }

    // Resolve constraints whose form is identically zero.
    let mut thr = BigInt::one();
    let mut live: Vec<LinConstraint> = Vec::new();
    for c in &sys.constraints {
        if !c.form_is_zero() {
            live.push(c.clone());
            continue;
        }
        let always = if c.is_eq {
            c.slope.is_zero() && c.offset.is_zero()
        } else {
            c.slope.is_negative() || (c.slope.is_zero() && !c.offset.is_positive())
        };
        if always {
            if c.slope.is_negative() {
                // slope*n + offset <= 0 once n >= ceil(offset / -slope).
                let t = c.offset.div_ceil(&-&c.slope).max(BigInt::one());
                max_assign(&mut thr, &t);
            }
            continue;
        }
        // Eventually violated: the count is zero past the crossing point.
        let t = if c.slope.is_zero() {
            BigInt::one()
        } else {
            c.offset.abs().div_floor(&c.slope.abs()) + 1
        };
        max_assign(&mut thr, &t.max(BigInt::one()));
        return Ok(EventualQP::zero().max_threshold(&thr));
    }

    // Eliminate an equality constraint lattice-exactly.  Prefer one whose
    // coefficient gcd is small, to keep the residue split narrow.
    let eq_pos = live
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_eq)
        .min_by_key(|(_, c)| {
            c.form
                .iter()
                .fold(BigInt::zero(), |acc, v| acc.gcd(v))
        })
        .map(|(i, _)| i);
    if let Some(pos) = eq_pos {
        let chosen = live.remove(pos);
        return eliminate_equality(sys.vars, &chosen, &live, fuel)
            .map(|e| e.max_threshold(&thr));
    }

    // Split an inequality with a nonzero constant offset into the
    // offset-free system and equality slices.
    let split_pos = live
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.offset.is_zero())
        .min_by_key(|(_, c)| c.offset.abs())
        .map(|(i, _)| i);
    if let Some(pos) = split_pos {
        let b = live[pos].offset.clone();
        if b.abs() > BigInt::from(SLICE_CAP) {
            return Err(Error::CapExceeded(format!("slice offset {b}")));
        }
        let mut free = live.clone();
        free[pos].offset = BigInt::zero();
        let base = count_ls(&LinearSystem::new(sys.vars, free)?, fuel)?;
        let mut total = base;
        let slice_offsets: Vec<BigInt> = if b.is_positive() {
            let mut v = Vec::new();
            let mut i = BigInt::zero();
            while i < b {
                v.push(i.clone());
                i += 1;
            }
            v
        } else {
            let mut v = Vec::new();
            let mut i = BigInt::from(-1);
            while i >= b {
                v.push(i.clone());
                i -= 1;
            }
            v
        };
        for off in slice_offsets {
            let mut slice = live.clone();
            slice[pos] = LinConstraint {
                slope: live[pos].slope.clone(),
                offset: off,
                form: live[pos].form.clone(),
                is_eq: true,
            };
            let part = count_ls(&LinearSystem::new(sys.vars, slice)?, fuel)?;
            total = if b.is_positive() {
                total.sub(&part)
            } else {
                total.add(&part)
            };
        }
        return Ok(total.max_threshold(&thr));
    }

    // Base case: pure inequalities `slope*n <= form . x`, a dilation of the
    // constant polytope `{y : form . y >= slope}`.
    if sys.vars == 0 {
        return Ok(EventualQP::one().max_threshold(&thr));
    }
    if live.is_empty() {
        return Err(Error::Unbounded);
    }
    let rows: Vec<Vec<IntPoly>> = live
        .iter()
        .map(|c| c.form.iter().map(|v| IntPoly::constant(v.clone())).collect())
        .collect();
    let rhs: Vec<IntPoly> = live.iter().map(|c| IntPoly::constant(c.slope.clone())).collect();
    let h = HRep::new(rows, rhs)?;
    ehrhart_dilation(&ParamPolytope::H(h)).map(|e| e.max_threshold(&thr))
}

/// Unimodular column sweep: returns `(g, w, kernel)` with `f . w = g > 0`
/// (the gcd of the nonzero entries) and `kernel` a lattice basis of
/// `{z : f . z = 0}`.
fn row_unimodular(f: &[BigInt]) -> (BigInt, Vec<BigInt>, Vec<Vec<BigInt>>) {
    let k = f.len();
    let mut cols: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::one();
            e
        })
        .collect();
    let mut vals = f.to_vec();
    for j in 1..k {
        if vals[j].is_zero() {
            continue;
        }
        if vals[0].is_zero() {
            cols.swap(0, j);
            vals.swap(0, j);
            continue;
        }
        let e = vals[0].extended_gcd(&vals[j]);
        let a = &vals[0] / &e.gcd;
        let b = &vals[j] / &e.gcd;
        let old0 = cols[0].clone();
        let oldj = cols[j].clone();
        for i in 0..k {
            cols[0][i] = &e.x * &old0[i] + &e.y * &oldj[i];
            cols[j][i] = &a * &oldj[i] - &b * &old0[i];
        }
        vals[0] = e.gcd;
        vals[j] = BigInt::zero();
    }
    if vals[0].is_negative() {
        vals[0] = -&vals[0];
        for c in cols[0].iter_mut() {
            *c = -&*c;
        }
    }
    let w = cols[0].clone();
    let kernel = cols.into_iter().skip(1).collect();
    (vals[0].clone(), w, kernel)
}

/// Eliminates `slope*n + offset = form . x` over the integers: splits the
/// parameter into residue classes where the divisibility condition holds,
/// substitutes the affine solution set `x0(t) + kernel . z`, and recurses in
/// the class variable `t`.
fn eliminate_equality(
    vars: usize,
    chosen: &LinConstraint,
    rest: &[LinConstraint],
    fuel: &mut i64,
) -> Result<EventualQP> {
    let (g, w, kernel) = row_unimodular(&chosen.form);
    debug_assert!(g.is_positive());
    let gs = g.gcd(&chosen.slope);
    let p0 = (&g / &gs).to_u64().ok_or_else(|| {
        Error::CapExceeded("residue split stride does not fit in u64".to_string())
    })?;
    let p0_big = BigInt::from(p0);
    let alpha = &chosen.slope * &p0_big / &g;
    let mut classes = Vec::with_capacity(p0 as usize);
    for r in 0..p0 {
        let r_big = BigInt::from(r);
        let val = &chosen.slope * &r_big + &chosen.offset;
        if !val.mod_floor(&g).is_zero() {
            classes.push(EventualQP::zero());
            continue;
        }
        let beta = &val / &g;
        // x0(t) = w * (alpha t + beta); remaining constraints become a
        // system in t and the kernel coordinates z.
        let mut new_cons = Vec::with_capacity(rest.len());
        for c in rest {
            let fw: BigInt = c.form.iter().zip(&w).map(|(a, b)| a * b).sum();
            let slope = &c.slope * &p0_big - &fw * &alpha;
            let offset = &c.slope * &r_big + &c.offset - &fw * &beta;
            let form: Vec<BigInt> = kernel
                .iter()
                .map(|col| c.form.iter().zip(col).map(|(a, b)| a * b).sum())
                .collect();
            new_cons.push(LinConstraint {
                slope,
                offset,
                form,
                is_eq: c.is_eq,
            });
        }
        let sub = LinearSystem::new(vars - 1, new_cons)?;
        classes.push(count_ls(&sub, fuel)?);
    }
    Ok(EventualQP::from_class_functions(p0, &classes))
}

// ---------------------------------------------------------------------------
// Dilation base case
// ---------------------------------------------------------------------------

/// Lattice-point count of the dilations `n Q` of a fixed rational polytope,
/// by exact interpolation against brute-force counts.
pub fn ehrhart_dilation(q: &ParamPolytope) -> Result<EventualQP> {
    let h = match q {
        ParamPolytope::H(h) => h.clone(),
        ParamPolytope::V(v) => v_to_h(v)?.0,
    };
    let constant = h
        .rows()
        .iter()
        .flatten()
        .chain(h.rhs())
        .all(|p| p.degree().unwrap_or(0) == 0);
    if !constant {
        return Err(Error::Domain(
            "dilation base case needs a constant polytope".to_string(),
        ));
    }
    let (verts, _) = h_to_v(&h)?;
    if verts.is_empty() {
        return Ok(EventualQP::zero());
    }
    let (bounded, _) = is_eventually_bounded(&h)?;
    if !bounded {
        return Err(Error::Unbounded);
    }
    let coords: Vec<Vec<num_rational::BigRational>> = verts
        .iter()
        .map(|v| {
            v.coords
                .iter()
                .map(|r| {
                    num_rational::BigRational::new(r.num().coeff(0), r.den().coeff(0))
                })
                .collect()
        })
        .collect();
    let mut d = BigInt::one();
    for v in &coords {
        for c in v {
            d = d.lcm(c.denom());
        }
    }
    let period = d.to_u64().ok_or_else(|| {
        Error::CapExceeded("vertex denominator lcm does not fit in u64".to_string())
    })?;
    let deg = affine_rank(&coords);

    let v_int: Vec<Vec<BigInt>> = h
        .rows()
        .iter()
        .map(|row| row.iter().map(|p| p.coeff(0)).collect())
        .collect();
    let c_int: Vec<BigInt> = h.rhs().iter().map(|p| p.coeff(0)).collect();
    let mut samples = Vec::new();
    let top = period * (deg as u64 + 4);
    for n in 1..=top {
        let n_big = BigInt::from(n);
        let scaled: Vec<BigInt> = c_int.iter().map(|c| c * &n_big).collect();
        let count = oracle::enumerate_hrep(&v_int, &scaled, DILATION_CAP)?;
        samples.push((n_big, count));
    }
    oracle::fit_quasipoly(&samples, period, deg, &BigInt::one())
        .map_err(|e| Error::Internal(format!("dilation interpolation failed: {e}")))
}

/// Dimension of the affine hull of a rational point set.
fn affine_rank(points: &[Vec<num_rational::BigRational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let dim = points[0].len();
    let mut rows: Vec<Vec<num_rational::BigRational>> = points[1..]
        .iter()
        .map(|p| (0..dim).map(|i| &p[i] - &points[0][i]).collect())
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &lead;
            for c in col..dim {
                let sub = &factor * &rows[rank][c];
                rows[r][c] = &rows[r][c] - &sub;
            }
        }
        rank += 1;
    }
    rank
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Polytope view of a Diophantine system: both inequality directions of each
/// equation plus the orthant bounds.  Identically zero equations are
/// resolved beforehand.
enum SystemShape {
    /// Some equation is `0 = b` with `b` eventually nonzero.
    EventuallyEmpty(BigInt),
    Polytope(HRep, BigInt),
}

fn diophantine_hrep(sys: &ParamSystem) -> Result<SystemShape> {
    let k = sys.vars();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut thr = BigInt::one();
    for (row, b) in sys.a.iter().zip(&sys.b) {
        if row.iter().all(IntPoly::is_zero) {
            if b.is_zero() {
                continue;
            }
            let (_, t) = eventual_sign(b);
            max_assign(&mut thr, &t);
            return Ok(SystemShape::EventuallyEmpty(thr));
        }
        rows.push(row.clone());
        rhs.push(b.clone());
        rows.push(row.iter().map(|p| -p).collect());
        rhs.push(-b);
    }
    for j in 0..k {
        let mut e = vec![IntPoly::zero(); k];
        e[j] = IntPoly::one();
        rows.push(e);
        rhs.push(IntPoly::zero());
    }
    Ok(SystemShape::Polytope(HRep::new(rows, rhs)?, thr))
}

/// Number of nonnegative integer solutions of `A(n) x = b(n)` as an eventual
/// quasi-polynomial.
pub fn count_diophantine(sys: &ParamSystem) -> Result<EventualQP> {
    let k = sys.vars();
    if k == 0 {
        let mut thr = BigInt::one();
        for b in &sys.b {
            if !b.is_zero() {
                let (_, t) = eventual_sign(b);
                max_assign(&mut thr, &t);
                return Ok(EventualQP::zero().max_threshold(&thr));
            }
        }
        return Ok(EventualQP::one());
    }
    let (h, mut thr) = match diophantine_hrep(sys)? {
        SystemShape::EventuallyEmpty(t) => return Ok(EventualQP::zero().max_threshold(&t)),
        SystemShape::Polytope(h, t) => (h, t),
    };
    let (bounded, bt) = is_eventually_bounded(&h)?;
    max_assign(&mut thr, &bt);
    if !bounded {
        return Err(Error::Unbounded);
    }
    let (verts, vt) = h_to_v(&h)?;
    max_assign(&mut thr, &vt);
    if verts.is_empty() {
        return Ok(EventualQP::zero().max_threshold(&thr));
    }
    let mut n_bound = 0usize;
    for v in &verts {
        for c in &v.coords {
            let deg = c.degree().unwrap_or(0).max(0) as usize;
            n_bound = n_bound.max(deg);
        }
    }
    for v in &verts {
        for c in &v.coords {
            let power = RatFunc::from_poly(IntPoly::monomial(BigInt::one(), n_bound + 1));
            let (_, ct) = eventual_compare(c, &power);
            max_assign(&mut thr, &ct);
        }
    }
    let expansion = reduce_to_linear(sys, n_bound)?;
    max_assign(&mut thr, &expansion.threshold);
    let mut total = EventualQP::zero();
    for (_, ls) in &expansion.systems {
        total = total.add(&count_linear_system(ls)?);
    }
    Ok(total.max_threshold(&thr).canonicalize().max_threshold(&thr))
}

/// Restriction of an integer-valued eventual quasi-polynomial to the residue
/// class `n = stride*s + class`, as an integer polynomial in `s`.  The
/// stride must be a multiple of both the period and the integrality stride.
fn eqp_class_poly(e: &EventualQP, stride: u64, class: u64) -> Result<IntPoly> {
    let refined = e.refine(stride)?;
    int_from_q(&refined.shifted(class))
        .ok_or_else(|| Error::Internal("class restriction is not integral".to_string()))
}

/// Number of lattice points of `{x : V(n) x >= c(n)}` as an eventual
/// quasi-polynomial.
pub fn count_hrep(h: &HRep) -> Result<EventualQP> {
    let dim = h.dim();
    let (bounded, mut thr) = is_eventually_bounded(h)?;
    if !bounded {
        return Err(Error::Unbounded);
    }
    let (verts, vt) = h_to_v(h)?;
    max_assign(&mut thr, &vt);
    if verts.is_empty() {
        return Ok(EventualQP::zero().max_threshold(&thr));
    }

    // Eventual polynomial lower bound per coordinate: floor of the
    // eventually smallest vertex coordinate.
    let mut floors = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut min = verts[0].coords[j].clone();
        for v in &verts[1..] {
            let (ord, t) = eventual_compare(&v.coords[j], &min);
            max_assign(&mut thr, &t);
            if ord == core::cmp::Ordering::Less {
                min = v.coords[j].clone();
            }
        }
        let (num, den) = {
            let (ds, dt) = eventual_sign(min.den());
            max_assign(&mut thr, &dt);
            if ds == Sign::Negative {
                (-min.num(), -min.den())
            } else {
                (min.num().clone(), min.den().clone())
            }
        };
        let div = gdiv_poly(&num, &den)?;
        max_assign(&mut thr, &div.threshold);
        floors.push(div.to_eqps().0);
    }

    let mut stride = 1u64;
    for f in &floors {
        stride = stride.lcm(&f.integer_shifted_form().0);
    }
    let stride_big = BigInt::from(stride);
    let mut classes = Vec::with_capacity(stride as usize);
    for r in 0..stride {
        let r_big = BigInt::from(r);
        let lower: Vec<IntPoly> = floors
            .iter()
            .map(|f| eqp_class_poly(f, stride, r))
            .collect::<Result<_>>()?;
        // x = x' + lower(s), x' >= 0, plus one slack per row:
        // V x' - w = c - V lower.
        let m = h.len();
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for (row, c) in h.rows().iter().zip(h.rhs()) {
            let comp: Vec<IntPoly> = row
                .iter()
                .map(|p| p.compose_affine(&stride_big, &r_big))
                .collect();
            let mut rhs = c.compose_affine(&stride_big, &r_big);
            for (p, l) in comp.iter().zip(&lower) {
                rhs = &rhs - &(p * l);
            }
            let mut arow = comp;
            arow.extend((0..m).map(|i| {
                if i == b.len() {
                    IntPoly::constant(BigInt::from(-1))
                } else {
                    IntPoly::zero()
                }
            }));
            a.push(arow);
            b.push(rhs);
        }
        let sub = ParamSystem::new(a, b)?;
        classes.push(count_diophantine(&sub)?);
    }
    let out = EventualQP::from_class_functions(stride, &classes);
    for f in &floors {
        max_assign(&mut thr, f.threshold());
    }
    Ok(out.max_threshold(&thr))
}

/// Number of lattice points of the convex hull of parametric vertices.
pub fn count_vrep(v: &VRep) -> Result<EventualQP> {
    let (h, thr) = v_to_h(v)?;
    Ok(count_hrep(&h)?.max_threshold(&thr))
}

/// Same count as `count_diophantine`, routed through the generalized Smith
/// normal form: solve `D y = U b` per residue class by generalized division,
/// then count the sign conditions `V y >= 0` over the free coordinates.
pub fn count_via_snf(sys: &ParamSystem) -> Result<EventualQP> {
    let m = sys.equations();
    let k = sys.vars();
    if k == 0 || m == 0 {
        return count_diophantine(sys);
    }
    let mat = EqpMatrix::from_fn(m, k, |i, j| EventualQP::from_poly(&sys.a[i][j]));
    let res = gsnf(&mat)?;
    let mut thr = res.threshold.clone();
    let b_vec: Vec<EventualQP> = sys.b.iter().map(EventualQP::from_poly).collect();
    let ub: Vec<EventualQP> = (0..m)
        .map(|i| {
            (0..m).fold(EventualQP::zero(), |acc, j| {
                acc.add(&res.u.get(i, j).mul(&b_vec[j]))
            })
        })
        .collect();
    let rank = m.min(k);
    let diag = res.diagonal();

    let mut stride = 1u64;
    for e in diag.iter().chain(&ub) {
        stride = stride.lcm(&e.integer_shifted_form().0);
    }
    for i in 0..k {
        for j in 0..k {
            stride = stride.lcm(&res.v.get(i, j).integer_shifted_form().0);
        }
    }

    let mut classes = Vec::with_capacity(stride as usize);
    'class: for r in 0..stride {
        let d_polys: Vec<IntPoly> = diag
            .iter()
            .map(|e| eqp_class_poly(e, stride, r))
            .collect::<Result<_>>()?;
        let ub_polys: Vec<IntPoly> = ub
            .iter()
            .map(|e| eqp_class_poly(e, stride, r))
            .collect::<Result<_>>()?;
        // Rows past the diagonal demand a zero right side.
        for p in ub_polys.iter().skip(rank) {
            if !p.is_zero() {
                let (_, t) = eventual_sign(p);
                classes.push(EventualQP::zero().max_threshold(&t));
                continue 'class;
            }
        }
        let mut free: Vec<usize> = (rank..k).collect();
        let mut quotients: Vec<Option<(EventualQP, EventualQP)>> = vec![None; rank];
        let mut dead = None;
        for i in 0..rank {
            if d_polys[i].is_zero() {
                if ub_polys[i].is_zero() {
                    free.push(i);
                } else {
                    let (_, t) = eventual_sign(&ub_polys[i]);
                    dead = Some(t);
                    break;
                }
            } else {
                let div = gdiv_poly(&ub_polys[i], &d_polys[i])?;
                max_assign(&mut thr, &div.threshold);
                quotients[i] = Some(div.to_eqps());
            }
        }
        if let Some(t) = dead {
            classes.push(EventualQP::zero().max_threshold(&t));
            continue;
        }
        free.sort_unstable();
        let mut sub_stride = 1u64;
        for q in quotients.iter().flatten() {
            sub_stride = sub_stride.lcm(&q.0.integer_shifted_form().0);
            sub_stride = sub_stride.lcm(&q.1.period());
        }
        let sub_big = BigInt::from(sub_stride);
        let v_polys: Vec<Vec<IntPoly>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| eqp_class_poly(res.v.get(i, j), stride, r))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let mut subclasses = Vec::with_capacity(sub_stride as usize);
        's: for c in 0..sub_stride {
            let c_big = BigInt::from(c);
            let mut y0 = vec![IntPoly::zero(); k];
            for (i, q) in quotients.iter().enumerate() {
                let Some((quot, rem)) = q else { continue };
                let rem_poly = rem.refine(sub_stride)?.shifted(c);
                if !rem_poly.is_zero() {
                    let (_, t) = eventual_sign_q(&rem_poly);
                    subclasses.push(EventualQP::zero().max_threshold(&t));
                    continue 's;
                }
                // Restrict the quotient to the subclass in the s variable.
                y0[i] = int_from_q(&quot.refine(sub_stride)?.shifted(c))
                    .ok_or_else(|| Error::Internal("non-integral quotient class".to_string()))?;
            }
            // x = V y with y = y0(u) + E z over the free coordinates.
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            let mut local_thr = BigInt::one();
            let mut infeasible = None;
            for t in 0..k {
                let vt: Vec<IntPoly> = v_polys[t]
                    .iter()
                    .map(|p| p.compose_affine(&sub_big, &c_big))
                    .collect();
                let mut base = IntPoly::zero();
                for (j, y) in y0.iter().enumerate() {
                    if !y.is_zero() {
                        base = &base + &(&vt[j] * y);
                    }
                }
                let coeffs: Vec<IntPoly> = free.iter().map(|&j| vt[j].clone()).collect();
                if coeffs.iter().all(IntPoly::is_zero) {
                    // Constraint base(u) >= 0 with no free variables left.
                    let (sign, st) = eventual_sign(&base);
                    max_assign(&mut local_thr, &st);
                    if sign == Sign::Negative {
                        infeasible = Some(local_thr.clone());
                        break;
                    }
                    continue;
                }
                rows.push(coeffs);
                rhs.push(-&base);
            }
            if let Some(t) = infeasible {
                subclasses.push(EventualQP::zero().max_threshold(&t));
                continue;
            }
            let count = if free.is_empty() || rows.is_empty() {
                EventualQP::one().max_threshold(&local_thr)
            } else {
                count_hrep(&HRep::new(rows, rhs)?)?.max_threshold(&local_thr)
            };
            subclasses.push(count);
        }
        classes.push(EventualQP::from_class_functions(sub_stride, &subclasses));
    }
    let out = EventualQP::from_class_functions(stride, &classes);
    Ok(out.max_threshold(&thr).canonicalize().max_threshold(&thr))
}

/// Brute-force solution count of a `LinearSystem` at one parameter value,
/// by depth-first search over the digit box with interval pruning.
pub fn enumerate_linear_system(sys: &LinearSystem, n: &BigInt, cap: u64) -> Result<BigInt> {
    if n < &BigInt::one() {
        return Err(Error::Domain("parameter must be positive".to_string()));
    }
    let hi = n - 1;
    let mut targets: Vec<BigInt> = sys
        .constraints
        .iter()
        .map(|c| &c.slope * n + &c.offset)
        .collect();
    // Remaining-range pruning state: start with every variable free.
    let mut x = vec![BigInt::zero(); sys.vars];
    let mut visited = 0u64;
    fn feasible(
        sys: &LinearSystem,
        targets: &[BigInt],
        x: &[BigInt],
        fixed: usize,
        hi: &BigInt,
    ) -> bool {
        for (c, t) in sys.constraints.iter().zip(targets) {
            let mut lo_sum = BigInt::zero();
            let mut hi_sum = BigInt::zero();
            for (j, coeff) in c.form.iter().enumerate() {
                if j < fixed {
                    let v = coeff * &x[j];
                    lo_sum += &v;
                    hi_sum += v;
                } else if coeff.is_positive() {
                    hi_sum += coeff * hi;
                } else if coeff.is_negative() {
                    lo_sum += coeff * hi;
                }
            }
            if &hi_sum < t || (c.is_eq && &lo_sum > t) {
                return false;
            }
        }
        true
    }
    fn dfs(
        sys: &LinearSystem,
        targets: &[BigInt],
        x: &mut Vec<BigInt>,
        fixed: usize,
        hi: &BigInt,
        visited: &mut u64,
        cap: u64,
    ) -> Result<BigInt> {
        *visited += 1;
        if *visited > cap {
            return Err(Error::CapExceeded(format!("more than {cap} search nodes")));
        }
        if !feasible(sys, targets, x, fixed, hi) {
            return Ok(BigInt::zero());
        }
        if fixed == sys.vars {
            return Ok(BigInt::one());
        }
        let mut total = BigInt::zero();
        let mut v = BigInt::zero();
        while &v <= hi {
            x[fixed] = v.clone();
            total += dfs(sys, targets, x, fixed + 1, hi, visited, cap)?;
            v += 1;
        }
        x[fixed] = BigInt::zero();
        Ok(total)
    }
    targets.shrink_to_fit();
    dfs(sys, &targets, &mut x, 0, &hi, &mut visited, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn poly(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    fn system(a: &[&[&str]], b: &[&str]) -> ParamSystem {
        let rows = a
            .iter()
            .map(|row| row.iter().map(|s| poly(s)).collect())
            .collect();
        let rhs = b.iter().map(|s| poly(s)).collect();
        ParamSystem::new(rows, rhs).unwrap()
    }

    #[test]
    fn carry_ranges_match_displayed_example() {
        let sys = system(&[&["2", "n + 1", "n^2"]], &["4*n^2 + 3*n - 5"]);
        let exp = reduce_to_linear(&sys, 2).unwrap();
        assert_eq!(exp.digit_counts, vec![2, 1, 0]);
        assert_eq!(
            exp.carry_ranges,
            vec![vec![
                (BigInt::from(0), BigInt::from(2)),
                (BigInt::from(0), BigInt::from(4)),
            ]]
        );
        // The carry tuple (0, 2) yields the three displayed level equations.
        let (_, ls) = exp
            .systems
            .iter()
            .find(|(t, _)| t == &[BigInt::from(0), BigInt::from(2)])
            .expect("carry tuple (0, 2) survives pruning");
        let eqs: Vec<&LinConstraint> = ls.constraints.iter().filter(|c| c.is_eq).collect();
        assert_eq!(eqs.len(), 3);
        // Variables: x10 x11 x12 x20 x21 x30.
        assert_eq!(*eqs[0], LinConstraint::eq(1, -5, &[2, 0, 0, 1, 0, 0]));
        assert_eq!(*eqs[1], LinConstraint::eq(2, 2, &[0, 2, 0, 1, 1, 0]));
        assert_eq!(*eqs[2], LinConstraint::eq(0, 2, &[0, 0, 2, 0, 1, 1]));
    }

    #[test]
    fn single_variable_constant_rhs() {
        let sys = system(&[&["1"]], &["7"]);
        let exp = reduce_to_linear(&sys, 0).unwrap();
        assert_eq!(exp.systems.len(), 1);
        let count = count_diophantine(&sys).unwrap();
        assert!(count.eq_eventually(&EventualQP::one()));
    }

    #[test]
    fn carry_expansion_is_a_bijection() {
        let sys = system(&[&["2", "n + 1", "n^2"]], &["4*n^2 + 3*n - 5"]);
        let exp = reduce_to_linear(&sys, 2).unwrap();
        for n in 6i64..=20 {
            let n_big = BigInt::from(n);
            let (a, b) = sys.eval(&n_big);
            let direct = oracle::enumerate_diophantine(&a, &b, 10_000_000).unwrap();
            let mut total = BigInt::zero();
            for (_, ls) in &exp.systems {
                total += enumerate_linear_system(ls, &n_big, 50_000_000).unwrap();
            }
            assert_eq!(total, direct, "bijection mismatch at n = {n}");
        }
    }

    #[test]
    fn dilation_segment_and_square() {
        let seg = HRep::new(
            vec![vec![poly("1")], vec![poly("-1")]],
            vec![poly("0"), poly("-1")],
        )
        .unwrap();
        let e = ehrhart_dilation(&ParamPolytope::H(seg)).unwrap();
        assert!(e.eq_eventually(&EventualQP::from_poly(&poly("n + 1"))));

        let square = HRep::new(
            vec![
                vec![poly("1"), poly("0")],
                vec![poly("0"), poly("1")],
                vec![poly("-1"), poly("0")],
                vec![poly("0"), poly("-1")],
            ],
            vec![poly("0"), poly("0"), poly("-1"), poly("-1")],
        )
        .unwrap();
        let e = ehrhart_dilation(&ParamPolytope::H(square)).unwrap();
        assert!(e.eq_eventually(&EventualQP::from_poly(&poly("n^2 + 2*n + 1"))));
    }

    #[test]
    fn dilation_half_triangle() {
        // conv{(0,0), (0,1), (1/2,0)}: x >= 0, y >= 0, -2x - y >= -1.
        let tri = HRep::new(
            vec![
                vec![poly("1"), poly("0")],
                vec![poly("0"), poly("1")],
                vec![poly("-2"), poly("-1")],
            ],
            vec![poly("0"), poly("0"), poly("-1")],
        )
        .unwrap();
        let e = ehrhart_dilation(&ParamPolytope::H(tri)).unwrap();
        assert_eq!(e.period(), 2);
        for n in 1i64..=9 {
            let k = n / 2;
            let expect = if n % 2 == 0 {
                (k + 1) * (k + 1)
            } else {
                (k + 1) * (k + 2)
            };
            assert_eq!(e.evaluate_i64(n), BigInt::from(expect), "n = {n}");
        }
    }

    #[test]
    fn polygon_linear_system() {
        // x >= 0, y >= 0, 2x + y <= n + 1.
        let sys = LinearSystem::new(
            2,
            vec![
                LinConstraint::le(0, 0, &[1, 0]),
                LinConstraint::le(0, 0, &[0, 1]),
                LinConstraint::le(-1, -1, &[-2, -1]),
            ],
        )
        .unwrap();
        let e = count_linear_system(&sys).unwrap();
        let expect = crate::eqp::tests::polygon_eqp();
        assert!(e.eq_eventually(&expect), "got {e}");
    }

    #[test]
    fn empty_system_counts_one() {
        let sys = LinearSystem::new(0, vec![]).unwrap();
        let e = count_linear_system(&sys).unwrap();
        assert!(e.eq_eventually(&EventualQP::one()));
    }

    #[test]
    fn inclusion_exclusion_recombines() {
        // P' = {2x + y <= n} and the interval slice recombine to the polygon
        // count: L_P = L_P' + (floor((n+1)/2) + 1).
        let free = LinearSystem::new(
            2,
            vec![
                LinConstraint::le(0, 0, &[1, 0]),
                LinConstraint::le(0, 0, &[0, 1]),
                LinConstraint::le(-1, 0, &[-2, -1]),
            ],
        )
        .unwrap();
        let base = count_linear_system(&free).unwrap();
        let polygon = crate::eqp::tests::polygon_eqp();
        for n in 3i64..=12 {
            let slice = (n + 1) / 2 + 1;
            assert_eq!(
                base.evaluate_i64(n) + slice,
                polygon.evaluate_i64(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn smith_example_diophantine() {
        let sys = system(
            &[&["n^2 + 2*n", "2*n + 4"]],
            &["2*n^3 + 8*n^2 + 8*n"],
        );
        let e = count_diophantine(&sys).unwrap();
        for n in 2i64..=30 {
            let expect = if n % 2 == 0 { 2 * n + 5 } else { n + 3 };
            let n_big = BigInt::from(n);
            let (a, b) = sys.eval(&n_big);
            let direct = oracle::enumerate_diophantine(&a, &b, 10_000_000).unwrap();
            assert_eq!(direct, BigInt::from(expect), "oracle at n = {n}");
            if n_big >= *e.threshold() {
                assert_eq!(e.evaluate_i64(n), BigInt::from(expect), "eqp at n = {n}");
            }
        }
        assert!(*e.threshold() <= BigInt::from(30));
    }

    #[test]
    fn hrep_interval_and_polygon() {
        // {0 <= x <= n} -> n + 1.
        let h = HRep::new(
            vec![vec![poly("1")], vec![poly("-1")]],
            vec![poly("0"), poly("-n")],
        )
        .unwrap();
        let e = count_hrep(&h).unwrap();
        assert!(e.eq_eventually(&EventualQP::from_poly(&poly("n + 1"))), "got {e}");

        // {x >= 0, y >= 0, 2x + y <= n + 1} -> polygon eqp.
        let h = HRep::new(
            vec![
                vec![poly("1"), poly("0")],
                vec![poly("0"), poly("1")],
                vec![poly("-2"), poly("-1")],
            ],
            vec![poly("0"), poly("0"), poly("-n - 1")],
        )
        .unwrap();
        let e = count_hrep(&h).unwrap();
        assert!(e.eq_eventually(&crate::eqp::tests::polygon_eqp()), "got {e}");
    }

    #[test]
    fn hrep_smith_interval() {
        // m y >= (m-1)(m^2+2m)... the even-class interval of the worked
        // Smith example, in the parameter m: 4(m-1)(m+1) <= y <= 4m^2+4m.
        let h = HRep::new(
            vec![vec![poly("n")], vec![poly("-1")]],
            vec![poly("4*n^3 - 4*n"), poly("-4*n^2 - 4*n")],
        )
        .unwrap();
        let e = count_hrep(&h).unwrap();
        assert!(e.eq_eventually(&EventualQP::from_poly(&poly("4*n + 5"))), "got {e}");
    }

    #[test]
    fn vrep_point_and_interval() {
        let point = VRep::new(vec![vec![RatFunc::from_int(3), RatFunc::from_int(5)]]).unwrap();
        let e = count_vrep(&point).unwrap();
        assert!(e.eq_eventually(&EventualQP::one()));

        // conv{0, n^2/(2n+1)}: count is floor(n^2/(2n+1)) + 1.
        let seg = VRep::new(vec![
            vec![RatFunc::from_int(0)],
            vec![RatFunc::new(poly("n^2"), poly("2*n + 1")).unwrap()],
        ])
        .unwrap();
        let e = count_vrep(&seg).unwrap();
        let (q, _) = gdiv_poly(&poly("n^2"), &poly("2*n + 1")).unwrap().to_eqps();
        let expect = q.add(&EventualQP::one());
        assert!(e.eq_eventually(&expect), "got {e} want {expect}");
    }

    #[test]
    fn vrep_triangle_matches_enumeration() {
        let tri = VRep::new(vec![
            vec![RatFunc::from_int(0), RatFunc::from_int(0)],
            vec![RatFunc::from_int(0), RatFunc::from_poly(poly("n"))],
            vec![
                RatFunc::new(poly("n"), poly("2")).unwrap(),
                RatFunc::from_int(0),
            ],
        ])
        .unwrap();
        let e = count_vrep(&tri).unwrap();
        for n in 2i64..=20 {
            let mut direct = 0i64;
            for x in 0..=n {
                for y in 0..=n {
                    if 2 * x + y <= n {
                        direct += 1;
                    }
                }
            }
            if BigInt::from(n) >= *e.threshold() {
                assert_eq!(e.evaluate_i64(n), BigInt::from(direct), "n = {n}");
            }
        }
        assert!(*e.threshold() <= BigInt::from(10));
    }

    #[test]
    fn snf_route_matches_direct_on_smith_example() {
        let sys = system(
            &[&["n^2 + 2*n", "2*n + 4"]],
            &["2*n^3 + 8*n^2 + 8*n"],
        );
        let direct = count_diophantine(&sys).unwrap();
        let via = count_via_snf(&sys).unwrap();
        assert!(direct.eq_eventually(&via), "direct {direct} vs snf {via}");
        for n in 2i64..=30 {
            let expect = if n % 2 == 0 { 2 * n + 5 } else { n + 3 };
            if BigInt::from(n) >= *via.threshold() {
                assert_eq!(via.evaluate_i64(n), BigInt::from(expect), "n = {n}");
            }
        }
    }

    #[test]
    fn snf_route_parity_obstruction() {
        let sys = system(&[&["2"]], &["n"]);
        let e = count_via_snf(&sys).unwrap();
        let direct = count_diophantine(&sys).unwrap();
        assert!(e.eq_eventually(&direct));
        for n in 10i64..=20 {
            let expect = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(e.evaluate_i64(n), BigInt::from(expect), "n = {n}");
        }
    }

    #[test]
    fn intro_system_matches_enumeration() {
        let sys = system(
            &[
                &["2*n + 1", "3*n + 1", "n^2"],
                &["2", "3", "n + 1"],
            ],
            &["3*n^3 + 1", "3*n^2 + n - 1"],
        );
        let e = count_diophantine(&sys).unwrap();
        // The closed form agrees with brute force from n = 7 on; n = 6 is a
        // genuine pre-threshold exception (count 2 against constituent value
        // 1), so no eventual quasi-polynomial can cover it.
        for n in 5i64..=25 {
            let n_big = BigInt::from(n);
            let (a, b) = sys.eval(&n_big);
            let direct = oracle::enumerate_diophantine(&a, &b, 50_000_000).unwrap();
            if n == 6 {
                assert_eq!(direct, BigInt::from(2));
                assert_eq!(e.evaluate_i64(n), BigInt::from(1));
            } else {
                assert_eq!(e.evaluate_i64(n), direct, "n = {n}");
            }
        }
    }
}
