//! Brute-force ground truth.
//!
//! Everything here is deliberately naive and independent of the symbolic
//! pipeline: solution sets are enumerated directly at concrete parameter
//! values, quasi-polynomials are refit from samples, and claimed closed
//! forms are checked value by value. The counting modules are tested
//! against these routines, so they share no code with them beyond basic
//! arithmetic.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::eqp::EventualQP;
use crate::error::{Error, Result};
use crate::polyring::QPoly;

/// Default cap on candidate tuples visited by the enumerators.
pub const DEFAULT_CAP: u64 = 10_000_000;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|c| BigInt::from(*c)).collect())
        .collect()
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|c| BigInt::from(*c)).collect()
}

/// Number of nonnegative integer solutions of `A x = b`.
pub fn enumerate_diophantine(a: &IntMatrix, b: &[BigInt], cap: u64) -> Result<BigInt> {
    let nvars = a.first().map_or(0, Vec::len);
    for row in a {
        if row.len() != nvars {
            return Err(Error::Domain("ragged coefficient matrix".to_string()));
        }
    }
    if a.len() != b.len() {
        return Err(Error::Domain("matrix and right side size mismatch".to_string()));
    }
    if nvars == 0 {
        let feasible = b.iter().all(Zero::is_zero);
        return Ok(if feasible { BigInt::one() } else { BigInt::zero() });
    }
    // A variable absent from every equation is free: the count is zero if
    // the rest of the system is infeasible and infinite otherwise.
    let zero_cols: Vec<usize> = (0..nvars)
        .filter(|j| a.iter().all(|row| row[*j].is_zero()))
        .collect();
    if !zero_cols.is_empty() {
        let reduced: IntMatrix = a
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| !zero_cols.contains(j))
                    .map(|(_, c)| c.clone())
                    .collect()
            })
            .collect();
        let count = enumerate_diophantine(&reduced, b, cap)?;
        if count.is_zero() {
            return Ok(BigInt::zero());
        }
        return Err(Error::Unbounded);
    }
    // Signed row views used for bounding; the sum row catches systems where
    // no single row bounds every variable.
    let mut views: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    let mut sum_row = vec![BigInt::zero(); nvars];
    let mut sum_rhs = BigInt::zero();
    for (row, rhs) in a.iter().zip(b) {
        for (s, c) in sum_row.iter_mut().zip(row) {
            *s += c;
        }
        sum_rhs += rhs;
        views.push((row.clone(), rhs.clone()));
        views.push((row.iter().map(|c| -c).collect(), -rhs));
    }
    views.push((sum_row.iter().map(|c| -c).collect(), -&sum_rhs));
    views.push((sum_row, sum_rhs));
    for j in 0..nvars {
        let bounded = views
            .iter()
            .any(|(row, _)| row[j].is_positive() && row.iter().all(|c| !c.is_negative()));
        if !bounded {
            return Err(Error::Unbounded);
        }
    }
    let mut visited = 0u64;
    let residual: Vec<BigInt> = views.iter().map(|(_, rhs)| rhs.clone()).collect();
    count_rec(&views, residual, 0, nvars, cap, &mut visited)
}

fn count_rec(
    views: &[(Vec<BigInt>, BigInt)],
    residual: Vec<BigInt>,
    j: usize,
    nvars: usize,
    cap: u64,
    visited: &mut u64,
) -> Result<BigInt> {
    if j == nvars {
        let ok = residual.iter().all(Zero::is_zero);
        return Ok(if ok { BigInt::one() } else { BigInt::zero() });
    }
    // Bound x_j using views whose remaining coefficients are nonnegative.
    let mut bound: Option<BigInt> = None;
    for (v, (row, _)) in views.iter().enumerate() {
        if row[j..].iter().any(Signed::is_negative) {
            continue;
        }
        if residual[v].is_negative() {
            return Ok(BigInt::zero());
        }
        if row[j].is_positive() {
            let this = residual[v].div_floor(&row[j]);
            bound = Some(match bound {
                Some(b) => b.min(this),
                None => this,
            });
        }
    }
    let bound = bound.ok_or(Error::Unbounded)?;
    let mut total = BigInt::zero();
    let mut x = BigInt::zero();
    let mut residual = residual;
    while x <= bound {
        *visited += 1;
        if *visited > cap {
            return Err(Error::CapExceeded(format!("more than {cap} candidate tuples")));
        }
        total += count_rec(views, residual.clone(), j + 1, nvars, cap, visited)?;
        for (r, (row, _)) in residual.iter_mut().zip(views) {
            *r -= &row[j];
        }
        x += 1;
    }
    Ok(total)
}

fn to_rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Solves a square rational system by Gaussian elimination.
fn solve_square(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let d = m.len();
    for col in 0..d {
        let pivot = (col..d).find(|r| !m[*r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for c in col..d {
            m[col][c] /= p.clone();
        }
        rhs[col] /= p;
        for r in 0..d {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..d {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] -= sub;
            }
            let sub = factor * rhs[col].clone();
            rhs[r] -= sub;
        }
    }
    Some(rhs)
}

/// Vertices of `{x : V x >= c}` as exact rational points: every feasible
/// intersection of `dim` constraint hyperplanes.
pub fn vertices(v: &IntMatrix, c: &[BigInt]) -> Vec<Vec<BigRational>> {
    let dim = v.first().map_or(0, Vec::len);
    let rows = v.len();
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    let mut subset = vec![0usize; dim];
    fn rec(
        v: &IntMatrix,
        c: &[BigInt],
        dim: usize,
        rows: usize,
        start: usize,
        k: usize,
        subset: &mut Vec<usize>,
        out: &mut Vec<Vec<BigRational>>,
    ) {
        if k == dim {
            let m: Vec<Vec<BigRational>> = subset
                .iter()
                .map(|r| v[*r].iter().map(to_rat).collect())
                .collect();
            let rhs: Vec<BigRational> = subset.iter().map(|r| to_rat(&c[*r])).collect();
            if let Some(x) = solve_square(m, rhs) {
                let feasible = v.iter().zip(c).all(|(row, ci)| {
                    let lhs: BigRational = row
                        .iter()
                        .zip(&x)
                        .map(|(a, xi)| to_rat(a) * xi.clone())
                        .sum();
                    lhs >= to_rat(ci)
                });
                if feasible && !out.contains(&x) {
                    out.push(x);
                }
            }
            return;
        }
        for r in start..rows {
            subset[k] = r;
            rec(v, c, dim, rows, r + 1, k + 1, subset, out);
        }
    }
    rec(v, c, dim, rows, 0, 0, &mut subset, &mut out);
    out
}

/// True when `{y : V y >= 0}` contains a nonzero direction, i.e. the
/// polyhedron is unbounded if nonempty.
fn has_recession_direction(v: &IntMatrix) -> bool {
    let dim = v.first().map_or(0, Vec::len);
    // Box the cone into [-1, 1]^dim; the cone is nonzero iff the boxed
    // polytope has a nonzero vertex.
    let mut rows = v.clone();
    let mut rhs: Vec<BigInt> = vec![BigInt::zero(); v.len()];
    for i in 0..dim {
        let mut lo = vec![BigInt::zero(); dim];
        lo[i] = BigInt::one();
        rows.push(lo);
        rhs.push(BigInt::from(-1));
        let mut hi = vec![BigInt::zero(); dim];
        hi[i] = BigInt::from(-1);
        rows.push(hi);
        rhs.push(BigInt::from(-1));
    }
    vertices(&rows, &rhs)
        .into_iter()
        .any(|p| p.iter().any(|x| !x.is_zero()))
}

/// Number of lattice points in `{x : V x >= c}`.
pub fn enumerate_hrep(v: &IntMatrix, c: &[BigInt], cap: u64) -> Result<BigInt> {
    let dim = v.first().map_or(0, Vec::len);
    if v.len() != c.len() {
        return Err(Error::Domain("matrix and right side size mismatch".to_string()));
    }
    if dim == 0 {
        let feasible = c.iter().all(|ci| !ci.is_positive());
        return Ok(if feasible { BigInt::one() } else { BigInt::zero() });
    }
    let verts = vertices(v, c);
    if verts.is_empty() {
        // No vertex: either empty, or nonempty but with a lineality space;
        // the latter is unbounded.
        if has_recession_direction(v) {
            return Err(Error::Unbounded);
        }
        return Ok(BigInt::zero());
    }
    if has_recession_direction(v) {
        return Err(Error::Unbounded);
    }
    let mut lo = vec![BigInt::zero(); dim];
    let mut hi = vec![BigInt::zero(); dim];
    for i in 0..dim {
        let min = verts.iter().map(|p| p[i].clone()).min().unwrap();
        let max = verts.iter().map(|p| p[i].clone()).max().unwrap();
        lo[i] = min.ceil().to_integer();
        hi[i] = max.floor().to_integer();
    }
    let mut visited = 0u64;
    let mut count = BigInt::zero();
    let mut x = lo.clone();
    'outer: loop {
        visited += 1;
        if visited > cap {
            return Err(Error::CapExceeded(format!("more than {cap} candidate tuples")));
        }
        let ok = v.iter().zip(c).all(|(row, ci)| {
            let lhs: BigInt = row.iter().zip(&x).map(|(a, xi)| a * xi).sum();
            lhs >= *ci
        });
        if ok {
            count += 1;
        }
        for i in (0..dim).rev() {
            if x[i] < hi[i] {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = lo[i].clone();
            if i == 0 {
                break 'outer;
            }
        }
        if dim == 0 {
            break;
        }
    }
    Ok(count)
}

/// Interpolates a quasi-polynomial of period `t` and degree at most `deg`
/// through the samples; every extra sample past the interpolation points
/// is treated as held-out validation.
pub fn fit_quasipoly(
    samples: &[(BigInt, BigInt)],
    t: u64,
    deg: usize,
    n0: &BigInt,
) -> Result<EventualQP> {
    let mut by_class: Vec<Vec<(BigInt, BigInt)>> = vec![Vec::new(); t as usize];
    for (n, count) in samples {
        if n < n0 {
            continue;
        }
        let class = n.mod_floor(&BigInt::from(t)).to_usize().unwrap();
        by_class[class].push((n.clone(), count.clone()));
    }
    let mut constituents = Vec::with_capacity(t as usize);
    for (class, pts) in by_class.iter().enumerate() {
        if pts.len() < deg + 2 {
            return Err(Error::Domain(format!(
                "class {class} has {} samples, need {}",
                pts.len(),
                deg + 2
            )));
        }
        // Vandermonde solve on the first deg+1 points.
        let m: Vec<Vec<BigRational>> = pts[..=deg]
            .iter()
            .map(|(n, _)| {
                let mut row = Vec::with_capacity(deg + 1);
                let mut pow = BigRational::one();
                for _ in 0..=deg {
                    row.push(pow.clone());
                    pow *= to_rat(n);
                }
                row
            })
            .collect();
        let rhs: Vec<BigRational> = pts[..=deg].iter().map(|(_, v)| to_rat(v)).collect();
        let coeffs = solve_square(m, rhs)
            .ok_or_else(|| Error::Domain(format!("repeated sample points in class {class}")))?;
        let q = QPoly::from_coeffs(coeffs);
        for (n, v) in &pts[deg + 1..] {
            if q.eval_int(n) != to_rat(v) {
                return Err(Error::Domain(format!(
                    "samples in class {class} are not degree-{deg} period-{t} quasi-polynomial (mismatch at n = {n})"
                )));
            }
        }
        constituents.push(q);
    }
    EventualQP::new(t, constituents, n0.clone())
}

/// Diagonal of the classical Smith normal form of an integer matrix,
/// normalized nonnegative.
pub fn integer_snf_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let dim = rows.min(cols);
    for r in 0..dim {
        'position: loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in r..rows {
                for j in r..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let better = pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs());
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'position;
            };
            a.swap(r, pi);
            for row in a.iter_mut() {
                row.swap(r, pj);
            }
            let mut dirty = false;
            for i in r + 1..rows {
                if a[i][r].is_zero() {
                    continue;
                }
                let q = a[i][r].div_floor(&a[r][r]);
                for j in r..cols {
                    let sub = &q * &a[r][j];
                    a[i][j] -= sub;
                }
                dirty |= !a[i][r].is_zero();
            }
            for j in r + 1..cols {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = a[r][j].div_floor(&a[r][r]);
                for row in a.iter_mut() {
                    let sub = &q * &row[r];
                    row[j] -= sub;
                }
                dirty |= !a[r][j].is_zero();
            }
            if dirty {
                continue;
            }
            let mut bad = None;
            'scan: for i in r + 1..rows {
                for j in r + 1..cols {
                    if !(&a[i][j] % &a[r][r]).is_zero() {
                        bad = Some(j);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(j) => {
                    for i in 0..rows {
                        let add = a[i][j].clone();
                        a[i][r] += add;
                    }
                }
                None => break 'position,
            }
        }
        if a[r][r].is_negative() {
            for j in r..cols {
                a[r][j] = -&a[r][j];
            }
        }
    }
    (0..dim).map(|i| a[i][i].clone()).collect()
}

/// One compared sample of a verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCheck {
    pub n: BigInt,
    pub claimed: BigInt,
    pub counted: BigInt,
    pub pass: bool,
}

/// Outcome of checking a claimed closed form against a concrete counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub samples: Vec<SampleCheck>,
    pub pass: bool,
    pub evaluations: u64,
}

/// Sample window `[n0, n0+4T]` plus one far point at `n0 + 10T`.
pub fn default_window(n0: &BigInt, t: u64) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::new();
    let mut n = n0.clone();
    let end = n0 + BigInt::from(4 * t);
    while n <= end {
        out.push(n.clone());
        n += 1;
    }
    out.push(n0 + BigInt::from(10 * t));
    out
}

/// Compares `claimed(n)` to `counter(n)` over the sample points.
pub fn verify_eqp(
    claimed: &EventualQP,
    counter: &mut dyn FnMut(&BigInt) -> Result<BigInt>,
    window: &[BigInt],
) -> Result<VerificationReport> {
    let mut samples = Vec::with_capacity(window.len());
    let mut evaluations = 0u64;
    let mut pass = true;
    for n in window {
        let counted = counter(n)?;
        evaluations += 1;
        let claimed_v = claimed.evaluate(n);
        let ok = claimed_v == counted;
        pass &= ok;
        samples.push(SampleCheck {
            n: n.clone(),
            claimed: claimed_v,
            counted,
            pass: ok,
        });
    }
    Ok(VerificationReport {
        samples,
        pass,
        evaluations,
    })
}

/// Pick's identity check for a 2D region with integral vertices:
/// `count == area + boundary/2 + 1`. Returns `None` when the region is not
/// full-dimensional or has a non-integral vertex.
pub fn pick_cross_check(v: &IntMatrix, c: &[BigInt], cap: u64) -> Result<Option<bool>> {
    let dim = v.first().map_or(0, Vec::len);
    if dim != 2 {
        return Ok(None);
    }
    let mut verts = vertices(v, c);
    if verts.len() < 3 || verts.iter().any(|p| p.iter().any(|x| !x.is_integer())) {
        return Ok(None);
    }
    // Order vertices counterclockwise around the centroid.
    let len = to_rat(&BigInt::from(verts.len() as i64));
    let cx: BigRational = verts.iter().map(|p| p[0].clone()).sum::<BigRational>() / len.clone();
    let cy: BigRational = verts.iter().map(|p| p[1].clone()).sum::<BigRational>() / len;
    let half = |p: &Vec<BigRational>| -> u8 {
        if p[1] > cy || (p[1] == cy && p[0] >= cx) {
            0
        } else {
            1
        }
    };
    verts.sort_by(|p, q| {
        half(p).cmp(&half(q)).then_with(|| {
            // Cross product of (p - centroid) x (q - centroid).
            let cross = (p[0].clone() - cx.clone()) * (q[1].clone() - cy.clone())
                - (q[0].clone() - cx.clone()) * (p[1].clone() - cy.clone());
            BigRational::zero().cmp(&cross)
        })
    });
    let mut twice_area = BigRational::zero();
    let mut boundary = BigInt::zero();
    for i in 0..verts.len() {
        let p = &verts[i];
        let q = &verts[(i + 1) % verts.len()];
        twice_area += p[0].clone() * q[1].clone() - q[0].clone() * p[1].clone();
        let dx = (q[0].clone() - p[0].clone()).to_integer();
        let dy = (q[1].clone() - p[1].clone()).to_integer();
        boundary += dx.gcd(&dy);
    }
    let area = twice_area.abs() / to_rat(&BigInt::from(2));
    let count = enumerate_hrep(v, c, cap)?;
    let expected = area + to_rat(&boundary) / to_rat(&BigInt::from(2)) + BigRational::one();
    Ok(Some(to_rat(&count) == expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diophantine_counts() {
        let count = enumerate_diophantine(&int_matrix(&[&[8, 8]]), &int_vec(&[64]), DEFAULT_CAP);
        assert_eq!(count.unwrap(), BigInt::from(9));
        let count = enumerate_diophantine(&int_matrix(&[&[0]]), &int_vec(&[1]), DEFAULT_CAP);
        assert_eq!(count.unwrap(), BigInt::zero());
        let count = enumerate_diophantine(&int_matrix(&[&[3, 4]]), &int_vec(&[12]), DEFAULT_CAP);
        assert_eq!(count.unwrap(), BigInt::from(2));
        assert!(matches!(
            enumerate_diophantine(&int_matrix(&[&[1, -1]]), &int_vec(&[0]), DEFAULT_CAP),
            Err(Error::Unbounded)
        ));
        assert!(matches!(
            enumerate_diophantine(&int_matrix(&[&[1, 1]]), &int_vec(&[100_000]), 100),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn diophantine_mixed_sign_rows() {
        // x + y = 10, x - y = 2 has the single solution (6, 4); the sum row
        // provides the bound even though the second row alone cannot.
        let count = enumerate_diophantine(
            &int_matrix(&[&[1, 1], &[1, -1]]),
            &int_vec(&[10, 2]),
            DEFAULT_CAP,
        );
        assert_eq!(count.unwrap(), BigInt::one());
    }

    #[test]
    fn hrep_counts() {
        // Triangle 2x + y <= 3, x >= 0, y >= 0.
        let v = int_matrix(&[&[-2, -1], &[1, 0], &[0, 1]]);
        let c = int_vec(&[-3, 0, 0]);
        assert_eq!(enumerate_hrep(&v, &c, DEFAULT_CAP).unwrap(), BigInt::from(6));
        // Empty: x >= 1, -x >= 0.
        let v = int_matrix(&[&[1], &[-1]]);
        let c = int_vec(&[1, 0]);
        assert_eq!(enumerate_hrep(&v, &c, DEFAULT_CAP).unwrap(), BigInt::zero());
        // Unit square dilated by 5.
        let v = int_matrix(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        let c = int_vec(&[0, 0, -5, -5]);
        assert_eq!(enumerate_hrep(&v, &c, DEFAULT_CAP).unwrap(), BigInt::from(36));
        // Half-plane is unbounded.
        let v = int_matrix(&[&[1, 0]]);
        let c = int_vec(&[0]);
        assert!(matches!(enumerate_hrep(&v, &c, DEFAULT_CAP), Err(Error::Unbounded)));
    }

    #[test]
    fn hrep_matches_diophantine_on_slices() {
        // Points of 3x + 4y = b, x,y >= 0 as a thin 2D polytope.
        for b in 0..=30i64 {
            let v = int_matrix(&[&[3, 4], &[-3, -4], &[1, 0], &[0, 1]]);
            let c = int_vec(&[b, -b, 0, 0]);
            let h = enumerate_hrep(&v, &c, DEFAULT_CAP).unwrap();
            let d = enumerate_diophantine(&int_matrix(&[&[3, 4]]), &int_vec(&[b]), DEFAULT_CAP)
                .unwrap();
            assert_eq!(h, d, "b = {b}");
        }
    }

    #[test]
    fn pick_identity_on_triangles() {
        let cases: &[(&[&[i64]], &[i64])] = &[
            (&[&[-1, -2], &[1, 0], &[0, 1]], &[-4, 0, 0]),
            (&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[0, 0, -7, -4]),
            (&[&[-1, -1], &[1, 0], &[0, 1]], &[-9, 0, 0]),
        ];
        for (rows, rhs) in cases {
            let v = int_matrix(rows);
            let c = int_vec(rhs);
            assert_eq!(pick_cross_check(&v, &c, DEFAULT_CAP).unwrap(), Some(true));
        }
    }

    #[test]
    fn fit_linear_function() {
        let samples: Vec<(BigInt, BigInt)> =
            (0..6).map(|n| (BigInt::from(n), BigInt::from(n + 1))).collect();
        let f = fit_quasipoly(&samples, 1, 1, &BigInt::zero()).unwrap();
        assert!(f.eq_eventually(&EventualQP::from_poly(
            &crate::polyring::parse_poly("n+1").unwrap()
        )));
    }

    #[test]
    fn fit_polygon_quasipoly() {
        let truth = crate::eqp::tests::polygon_eqp();
        let samples: Vec<(BigInt, BigInt)> = (0..14)
            .map(|n| (BigInt::from(n), truth.evaluate_i64(n)))
            .collect();
        let f = fit_quasipoly(&samples, 2, 2, &BigInt::zero()).unwrap();
        assert!(f.eq_eventually(&truth));
        // Wrong period hypothesis is detected.
        assert!(fit_quasipoly(&samples, 1, 2, &BigInt::zero()).is_err());
        // Too few samples per class is an error.
        assert!(fit_quasipoly(&samples[..5], 2, 2, &BigInt::zero()).is_err());
    }

    #[test]
    fn fit_single_equation_parity_counts() {
        // Solutions of (n^2+2n)x + (2n+4)y = (2n+4)(n^2+2n): 2n+5 on even
        // n, n+3 on odd n.
        let mut samples = Vec::new();
        for n in 2..=13i64 {
            let a = int_matrix(&[&[n * n + 2 * n, 2 * n + 4]]);
            let b = int_vec(&[(n * n + 2 * n) * (2 * n + 4)]);
            let count = enumerate_diophantine(&a, &b, DEFAULT_CAP).unwrap();
            let expect = if n % 2 == 0 { 2 * n + 5 } else { n + 3 };
            assert_eq!(count, BigInt::from(expect), "n = {n}");
            samples.push((BigInt::from(n), count));
        }
        let f = fit_quasipoly(&samples, 2, 1, &BigInt::from(2)).unwrap();
        assert_eq!(f.evaluate_i64(20), BigInt::from(45));
        assert_eq!(f.evaluate_i64(21), BigInt::from(24));
    }

    #[test]
    fn verification_reports() {
        let truth = crate::eqp::tests::polygon_eqp();
        let window = default_window(&BigInt::from(2), 2);
        assert_eq!(window.len(), 10);
        assert_eq!(*window.last().unwrap(), BigInt::from(22));
        let mut counter = |n: &BigInt| -> Result<BigInt> {
            // The polygon x >= 0, y >= 0, 2x + y <= n + 1.
            let v = int_matrix(&[&[1, 0], &[0, 1], &[-2, -1]]);
            let c = vec![BigInt::zero(), BigInt::zero(), -(n.clone() + BigInt::one())];
            enumerate_hrep(&v, &c, DEFAULT_CAP)
        };
        let report = verify_eqp(&truth, &mut counter, &window).unwrap();
        assert!(report.pass, "{:?}", report.samples);
        assert!(report.samples.iter().all(|s| s.pass));
        assert_eq!(report.evaluations, 10);

        let wrong = truth.add(&EventualQP::one());
        let report = verify_eqp(&wrong, &mut counter, &window).unwrap();
        assert!(!report.pass);
        assert!(report.samples.iter().all(|s| !s.pass));
    }
}
