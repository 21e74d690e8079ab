//! Generalized Smith normal form.
//!
//! A matrix of eventually quasi-polynomial entries is brought to diagonal
//! form `U M V = D` where `U`, `V` have determinant `+-1` on every residue
//! class and the diagonal entries divide each other pointwise. The
//! elimination mirrors the classical Smith reduction, with gcd steps
//! replaced by the generalized gcd and with the bordered-matrix
//! construction supplying unimodular row transforms from Bezout
//! certificates.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::eqp::EventualQP;
use crate::error::{Error, Result};
use crate::gendiv::{gbezout, ggcd_many, try_exact_div_eqp};
use crate::polyring::{eventual_sign_q, Sign};

/// Default step budget for one normal form computation.
const SNF_FUEL: u64 = 10_000;

/// Rectangular matrix of quasi-polynomial entries, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct EqpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<EventualQP>,
}

impl EqpMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<EventualQP>) -> Result<EqpMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::Domain(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(EqpMatrix {
            rows,
            cols,
            data: entries.into_iter().map(|e| e.canonicalize()).collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> EventualQP) -> EqpMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).canonicalize());
            }
        }
        EqpMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> EqpMatrix {
        EqpMatrix::from_fn(n, n, |i, j| {
            if i == j {
                EventualQP::one()
            } else {
                EventualQP::zero()
            }
        })
    }

    pub fn zero(rows: usize, cols: usize) -> EqpMatrix {
        EqpMatrix::from_fn(rows, cols, |_, _| EventualQP::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &EventualQP {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: EventualQP) {
        self.data[i * self.cols + j] = value;
    }

    pub fn mul(&self, other: &EqpMatrix) -> EqpMatrix {
        assert_eq!(self.cols, other.rows);
        EqpMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = EventualQP::zero();
            for t in 0..self.cols {
                acc = acc.add(&self.get(i, t).mul(other.get(t, j)));
            }
            acc
        })
    }

    pub fn transpose(&self) -> EqpMatrix {
        EqpMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(EventualQP::is_zero)
    }

    pub fn eq_eventually(&self, other: &EqpMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.eq_eventually(b))
    }

    /// Laplace expansion; intended for the small certificate matrices.
    pub fn determinant(&self) -> EventualQP {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => EventualQP::one(),
            1 => self.get(0, 0).clone(),
            n => {
                let mut acc = EventualQP::zero();
                for j in 0..n {
                    if self.get(0, j).is_zero() {
                        continue;
                    }
                    let minor = EqpMatrix::from_fn(n - 1, n - 1, |r, c| {
                        self.get(r + 1, if c < j { c } else { c + 1 }).clone()
                    });
                    let term = self.get(0, j).mul(&minor.determinant());
                    acc = if j % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    pub fn max_threshold(&self) -> BigInt {
        self.data
            .iter()
            .map(|e| e.threshold().clone())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i -= q * row_r
    fn row_sub(&mut self, i: usize, r: usize, q: &EventualQP) {
        for j in 0..self.cols {
            let sub = q.mul(self.get(r, j));
            self.set(i, j, self.get(i, j).sub(&sub));
        }
    }

    /// col_j -= q * col_r
    fn col_sub(&mut self, j: usize, r: usize, q: &EventualQP) {
        for i in 0..self.rows {
            let sub = q.mul(self.get(i, r));
            self.set(i, j, self.get(i, j).sub(&sub));
        }
    }

    fn col_add(&mut self, dst: usize, src: usize) {
        for i in 0..self.rows {
            self.set(i, dst, self.get(i, dst).add(self.get(i, src)));
        }
    }

    fn scale_row(&mut self, i: usize, s: &EventualQP) {
        for j in 0..self.cols {
            self.set(i, j, self.get(i, j).mul(s));
        }
    }
}

impl fmt::Display for EqpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                writeln!(f, "[{i}][{j}]:")?;
                writeln!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EqpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `+-1`-valued unit with `s * e = |e|` eventually.
fn sign_unit(e: &EventualQP) -> EventualQP {
    let c = e.canonicalize();
    let constituents = c
        .constituents()
        .iter()
        .map(|q| {
            if eventual_sign_q(q).0 == Sign::Negative {
                crate::polyring::QPoly::from_i64s(&[-1])
            } else {
                crate::polyring::QPoly::from_i64s(&[1])
            }
        })
        .collect();
    EventualQP::new(c.period(), constituents, c.threshold().clone())
        .expect("unit constituents are integer-valued")
}

fn exact_div(a: &EventualQP, d: &EventualQP) -> Result<EventualQP> {
    try_exact_div_eqp(a, d).ok_or_else(|| Error::Internal("expected exact division".to_string()))
}

fn divides(d: &EventualQP, a: &EventualQP) -> Result<bool> {
    Ok(try_exact_div_eqp(a, d).is_some())
}

/// Square matrix with the given first row whose determinant is the
/// generalized gcd of that row (up to the sign of the first entry when
/// only that entry is nonzero).
pub fn bordered_matrix(alphas: &[EventualQP]) -> Result<EqpMatrix> {
    if alphas.is_empty() || alphas.iter().all(EventualQP::is_zero) {
        return Err(Error::Domain("bordered matrix of an all-zero row".to_string()));
    }
    let k = alphas.len();
    let mut w = EqpMatrix::new(1, 1, vec![alphas[0].clone()])?;
    // Signed running determinant: equals the gcd of the processed prefix
    // except that a single leading entry keeps its sign.
    let mut det = alphas[0].clone();
    for step in 1..k {
        let alpha = &alphas[step];
        let (d_next, u, v) = if det.is_zero() && alpha.is_zero() {
            (EventualQP::zero(), EventualQP::one(), EventualQP::zero())
        } else {
            gbezout(&det, alpha)?
        };
        let rho = u;
        let sigma = v.neg();
        let prev = w;
        let n = step + 1;
        let mut data = Vec::with_capacity(n * n);
        for j in 0..step {
            data.push(alphas[j].clone());
        }
        data.push(alpha.clone());
        for i in 1..step {
            for j in 0..step {
                data.push(prev.get(i, j).clone());
            }
            data.push(EventualQP::zero());
        }
        if det.is_zero() {
            // Whole prefix is zero: a signed permutation row keeps the
            // determinant equal to |alpha|.
            let s = if step % 2 == 0 {
                sign_unit(alpha)
            } else {
                sign_unit(alpha).neg()
            };
            for j in 0..step {
                data.push(if j == step - 1 { s.clone() } else { EventualQP::zero() });
            }
            data.push(EventualQP::zero());
        } else {
            for j in 0..step {
                data.push(exact_div(&alphas[j].mul(&sigma), &det)?);
            }
            data.push(rho);
        }
        w = EqpMatrix::new(n, n, data)?;
        det = if det.is_zero() {
            // det(W) = |alpha| by the permutation sign choice above.
            alpha.mul(&sign_unit(alpha))
        } else {
            d_next
        };
    }
    Ok(w)
}

/// Diagonal form with unimodular certificates: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct GSnfResult {
    pub d: EqpMatrix,
    pub u: EqpMatrix,
    pub v: EqpMatrix,
    pub threshold: BigInt,
}

impl GSnfResult {
    /// Symbolic check of the defining identities.
    pub fn verify(&self, m: &EqpMatrix) -> bool {
        if !self.u.mul(m).mul(&self.v).eq_eventually(&self.d) {
            return false;
        }
        let unit = |mat: &EqpMatrix| {
            let det = mat.determinant().canonicalize();
            det.constituents()
                .iter()
                .all(|q| *q == crate::polyring::QPoly::from_i64s(&[1])
                    || *q == crate::polyring::QPoly::from_i64s(&[-1]))
        };
        unit(&self.u) && unit(&self.v)
    }

    /// Diagonal entries d_1, ..., d_min(k,s).
    pub fn diagonal(&self) -> Vec<EventualQP> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Ordering key for pivot selection: smaller degree, then smaller leading
/// coefficients.
fn pivot_key(e: &EventualQP) -> (usize, BigInt) {
    let c = e.canonicalize();
    let deg = c
        .constituents()
        .iter()
        .filter_map(|q| q.degree())
        .max()
        .unwrap_or(0);
    let lc = c
        .constituents()
        .iter()
        .filter_map(|q| q.coeffs().last())
        .map(|x| x.numer().abs() + x.denom().abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    (deg, lc)
}

/// Embeds a square block at `(r, r)` into an identity of size `n`.
fn embed(block: &EqpMatrix, n: usize, r: usize) -> EqpMatrix {
    EqpMatrix::from_fn(n, n, |i, j| {
        if i >= r && j >= r {
            block.get(i - r, j - r).clone()
        } else if i == j {
            EventualQP::one()
        } else {
            EventualQP::zero()
        }
    })
}

/// Generalized Smith normal form of `m`.
pub fn gsnf(m: &EqpMatrix) -> Result<GSnfResult> {
    let (k, s) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = EqpMatrix::identity(k);
    let mut v = EqpMatrix::identity(s);
    let mut fuel = SNF_FUEL;
    let spend = |fuel: &mut u64| -> Result<()> {
        if *fuel == 0 {
            return Err(Error::FuelExhausted("smith normal form".to_string()));
        }
        *fuel -= 1;
        Ok(())
    };
    for r in 0..k.min(s) {
        'position: loop {
            spend(&mut fuel)?;
            // Pivot: smallest nonzero entry of the trailing block.
            let mut pivot: Option<(usize, usize, (usize, BigInt))> = None;
            for i in r..k {
                for j in r..s {
                    if a.get(i, j).is_zero() {
                        continue;
                    }
                    let key = pivot_key(a.get(i, j));
                    if pivot.as_ref().map_or(true, |(_, _, best)| key < *best) {
                        pivot = Some((i, j, key));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else {
                break 'position;
            };
            a.swap_rows(r, pi);
            u.swap_rows(r, pi);
            a.swap_cols(r, pj);
            v.swap_cols(r, pj);
            loop {
                spend(&mut fuel)?;
                // Make the pivot divide its column, then clear the column.
                let col: Vec<EventualQP> = (r..k).map(|i| a.get(i, r).clone()).collect();
                let col_divisible = col[1..]
                    .iter()
                    .map(|e| divides(&col[0], e))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|b| b);
                if !col_divisible {
                    let (_, us) = ggcd_many(&col)?;
                    let w = embed(&bordered_matrix(&us)?, k, r);
                    a = w.mul(&a);
                    u = w.mul(&u);
                }
                for i in r + 1..k {
                    if a.get(i, r).is_zero() {
                        continue;
                    }
                    let q = exact_div(a.get(i, r), a.get(r, r))?;
                    a.row_sub(i, r, &q);
                    u.row_sub(i, r, &q);
                }
                if (r + 1..s).all(|j| a.get(r, j).is_zero()) {
                    break;
                }
                // Same for the row, acting on columns from the right.
                let row: Vec<EventualQP> = (r..s).map(|j| a.get(r, j).clone()).collect();
                let row_divisible = row[1..]
                    .iter()
                    .map(|e| divides(&row[0], e))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|b| b);
                if !row_divisible {
                    let (_, us) = ggcd_many(&row)?;
                    let wt = embed(&bordered_matrix(&us)?.transpose(), s, r);
                    a = a.mul(&wt);
                    v = v.mul(&wt);
                }
                for j in r + 1..s {
                    if a.get(r, j).is_zero() {
                        continue;
                    }
                    let q = exact_div(a.get(r, j), a.get(r, r))?;
                    a.col_sub(j, r, &q);
                    v.col_sub(j, r, &q);
                }
                if (r + 1..k).all(|i| a.get(i, r).is_zero()) {
                    break;
                }
            }
            // The pivot must divide the trailing block before moving on.
            let mut bad = None;
            'scan: for i in r + 1..k {
                for j in r + 1..s {
                    if !divides(a.get(r, r), a.get(i, j))? {
                        bad = Some(j);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(j) => {
                    a.col_add(r, j);
                    v.col_add(r, j);
                }
                None => break 'position,
            }
        }
        // Nonnegative diagonal.
        let sgn = sign_unit(a.get(r, r));
        if !sgn.eq_eventually(&EventualQP::one()) {
            a.scale_row(r, &sgn);
            u.scale_row(r, &sgn);
        }
    }
    let threshold = a
        .max_threshold()
        .max(u.max_threshold())
        .max(v.max_threshold());
    Ok(GSnfResult { d: a, u, v, threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;
    use num_traits::ToPrimitive;

    fn p(s: &str) -> EventualQP {
        EventualQP::from_poly(&parse_poly(s).unwrap())
    }

    #[test]
    fn bordered_matrix_examples() {
        let w = bordered_matrix(&[p("5")]).unwrap();
        assert!(w.determinant().eq_eventually(&p("5")));

        let w = bordered_matrix(&[p("2"), p("x")]).unwrap();
        assert_eq!(w.get(0, 0), &p("2"));
        assert_eq!(w.get(0, 1), &p("x"));
        let d = w.determinant();
        let expect = crate::gendiv::ggcd(&p("2"), &p("x")).unwrap();
        assert!(d.eq_eventually(&expect));

        let w = bordered_matrix(&[p("3x+1"), EventualQP::zero()]).unwrap();
        assert!(w.determinant().eq_eventually(&p("3x+1")));

        let w = bordered_matrix(&[EventualQP::zero(), p("x")]).unwrap();
        assert!(w.determinant().eq_eventually(&p("x")));

        let w = bordered_matrix(&[p("2"), p("x"), p("x+1")]).unwrap();
        let d = w.determinant();
        assert!(d.eq_eventually(&EventualQP::one()));

        assert!(bordered_matrix(&[]).is_err());
        assert!(bordered_matrix(&[EventualQP::zero()]).is_err());
    }

    fn assert_matches_integer_snf(m: &EqpMatrix, res: &GSnfResult, lo: i64, hi: i64) {
        assert!(res.verify(m), "certificate identity failed");
        for n in lo..=hi {
            let concrete: Vec<Vec<BigInt>> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).evaluate_i64(n)).collect())
                .collect();
            let expect = crate::oracle::integer_snf_diagonal(&concrete);
            for (idx, e) in expect.iter().enumerate() {
                assert_eq!(
                    &res.d.get(idx, idx).evaluate_i64(n),
                    e,
                    "diagonal {idx} at n = {n}"
                );
            }
        }
    }

    #[test]
    fn paper_two_by_two_example() {
        let m = EqpMatrix::new(
            2,
            2,
            alloc::vec![p("2"), p("3x+2"), p("x"), p("x^3+2x")],
        )
        .unwrap();
        let res = gsnf(&m).unwrap();
        // Even classes give diag(2, 8m^3-6m^2+2m), odd classes
        // diag(1, 16m^3+12m^2+4m+1), both in the shifted variable n=2m+i.
        let d11 = EventualQP::from_class_functions(2, &[p("2"), p("1")]);
        let d22 = EventualQP::from_class_functions(
            2,
            &[p("8m^3-6m^2+2m"), p("16m^3+12m^2+4m+1")],
        );
        assert!(res.d.get(0, 0).eq_eventually(&d11));
        assert!(res.d.get(1, 1).eq_eventually(&d22));
        assert!(res.d.get(0, 1).is_zero() && res.d.get(1, 0).is_zero());
        let start = res.threshold.to_i64().unwrap().max(2);
        assert_matches_integer_snf(&m, &res, start, start + 8);
    }

    #[test]
    fn identity_matrix_is_fixed() {
        let m = EqpMatrix::identity(3);
        let res = gsnf(&m).unwrap();
        assert!(res.verify(&m));
        assert!(res.d.eq_eventually(&m));
    }

    #[test]
    fn one_by_two_row_matrix() {
        let m = EqpMatrix::new(1, 2, alloc::vec![p("n^2+2n"), p("2n+4")]).unwrap();
        let res = gsnf(&m).unwrap();
        assert!(res.verify(&m));
        assert!(res.d.get(0, 1).is_zero());
        let start = res.threshold.to_i64().unwrap().max(5);
        assert_matches_integer_snf(&m, &res, start, start + 10);
        let expect = crate::gendiv::ggcd(&p("n^2+2n"), &p("2n+4")).unwrap();
        assert!(res.d.get(0, 0).eq_eventually(&expect));
    }

    #[test]
    fn zero_matrix() {
        let m = EqpMatrix::zero(2, 3);
        let res = gsnf(&m).unwrap();
        assert!(res.verify(&m));
        assert!(res.d.is_zero());
        assert!(res.u.eq_eventually(&EqpMatrix::identity(2)));
        assert!(res.v.eq_eventually(&EqpMatrix::identity(3)));
    }

    #[test]
    fn random_matrices_match_integer_snf() {
        let mut state = 0x9fb2_1135_7d44_aa01u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for case in 0..12 {
            let (rows, cols) = if case % 2 == 0 { (2, 3) } else { (3, 3) };
            let entries: Vec<EventualQP> = (0..rows * cols)
                .map(|_| {
                    let deg = (next() % 2) as usize;
                    let coeffs: Vec<BigInt> =
                        (0..=deg).map(|_| BigInt::from((next() % 7) as i64 - 3)).collect();
                    EventualQP::from_poly(&crate::polyring::IntPoly::from_coeffs(coeffs))
                })
                .collect();
            let m = EqpMatrix::new(rows, cols, entries).unwrap();
            let res = gsnf(&m).unwrap();
            let start = res.threshold.to_i64().unwrap().max(2);
            assert_matches_integer_snf(&m, &res, start, start + 6);
            // Divisibility chain.
            let diag = res.diagonal();
            for w in diag.windows(2) {
                if !w[1].is_zero() {
                    assert!(divides(&w[0], &w[1]).unwrap(), "chain broken");
                }
            }
        }
    }
}
