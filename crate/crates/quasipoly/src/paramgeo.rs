//! Parametric polytope geometry over the rational-function field.
//!
//! A polytope family `P(n)` is given either by halfspaces `V(n)x >= c(n)`
//! with integer-polynomial entries ([`HRep`]) or by vertices with
//! rational-function coordinates ([`VRep`]). For `n` large enough the
//! combinatorics stabilize, so conversion in both directions can be done
//! once, symbolically, over the field of rational functions; every decision
//! (independence, feasibility, side of a hyperplane) is an eventual sign
//! test with an explicit threshold. Facet enumeration is combinatorial over
//! all subsets of the expected size, which is fine at desk scale
//! (dimension at most 4 or so, around a dozen vertices).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyring::{eventual_sign, IntPoly, RatFunc, Sign};

/// Halfspace description `V(n)x >= c(n)`: one inequality per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    rows: Vec<Vec<IntPoly>>,
    rhs: Vec<IntPoly>,
}

impl HRep {
    pub fn new(rows: Vec<Vec<IntPoly>>, rhs: Vec<IntPoly>) -> Result<HRep> {
        if rows.is_empty() {
            return Err(Error::Domain("halfspace description needs rows".to_string()));
        }
        if rows.len() != rhs.len() {
            return Err(Error::Domain("row and rhs counts differ".to_string()));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::Domain("ambient dimension zero".to_string()));
        }
        for row in &rows {
            if row.len() != d {
                return Err(Error::Domain("ragged constraint matrix".to_string()));
            }
            if row.iter().all(IntPoly::is_zero) {
                return Err(Error::Domain("zero row in constraint matrix".to_string()));
            }
        }
        Ok(HRep { rows, rhs })
    }

    pub fn rows(&self) -> &[Vec<IntPoly>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[IntPoly] {
        &self.rhs
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Concrete instance at `n`: the integer matrix and right-hand side.
    pub fn eval(&self, n: &BigInt) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let m = self
            .rows
            .iter()
            .map(|row| row.iter().map(|p| p.eval(n)).collect())
            .collect();
        let c = self.rhs.iter().map(|p| p.eval(n)).collect();
        (m, c)
    }
}

/// Vertex description: a nonempty list of points with rational-function
/// coordinates. Canonical [`RatFunc`] denominators are nonzero polynomials,
/// so every coordinate is defined for `n` large.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VRep {
    vertices: Vec<Vec<RatFunc>>,
}

impl VRep {
    pub fn new(vertices: Vec<Vec<RatFunc>>) -> Result<VRep> {
        if vertices.is_empty() {
            return Err(Error::Domain("vertex description needs points".to_string()));
        }
        let d = vertices[0].len();
        if d == 0 {
            return Err(Error::Domain("ambient dimension zero".to_string()));
        }
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::Domain("ragged vertex list".to_string()));
        }
        Ok(VRep { vertices })
    }

    pub fn vertices(&self) -> &[Vec<RatFunc>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }
}

/// Either representation of a parametric polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamPolytope {
    H(HRep),
    V(VRep),
}

/// A vertex together with the row index set whose equations define it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamVertex {
    pub coords: Vec<RatFunc>,
    pub index_set: Vec<usize>,
}

// ---------------------------------------------------------------------------
// Linear algebra over the rational-function field
// ---------------------------------------------------------------------------

/// Reduce `mat` to row echelon form in place; returns the pivot columns.
/// Pivot choice favors the entry of lowest degree to control swell.
fn echelon(mat: &mut [Vec<RatFunc>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let mut best: Option<(usize, isize)> = None;
        for (i, row) in mat.iter().enumerate().take(rows).skip(r) {
            if let Some(deg) = row[c].degree() {
                if best.map_or(true, |(_, d)| deg < d) {
                    best = Some((i, deg));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        mat.swap(r, p);
        let inv = mat[r][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            mat[r][j] = mat[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..cols {
                    let delta = mat[r][j].mul(&f);
                    mat[i][j] = mat[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Solve the square system `a x = b`; `None` when `a` is singular as a
/// matrix over the rational-function field.
fn solve_square(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let d = a.len();
    let mut mat: Vec<Vec<RatFunc>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut mat);
    if pivots.len() != d || pivots.iter().any(|&c| c >= d) {
        return None;
    }
    let mut x = vec![RatFunc::zero(); d];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = mat[r][d].clone();
    }
    Some(x)
}

/// Basis of the nullspace of `mat` (a list of row vectors).
fn nullspace(mat: &[Vec<RatFunc>], cols: usize) -> Vec<Vec<RatFunc>> {
    let mut work: Vec<Vec<RatFunc>> = mat.to_vec();
    let pivots = echelon(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![RatFunc::zero(); cols];
        v[f] = RatFunc::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = work[r][f].neg();
        }
        basis.push(v);
    }
    basis
}

fn dot_poly(row: &[IntPoly], x: &[RatFunc]) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (p, xi) in row.iter().zip(x) {
        acc = acc.add(&RatFunc::from_poly(p.clone()).mul(xi));
    }
    acc
}

fn dot_rf(a: &[RatFunc], b: &[RatFunc]) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (ai, bi) in a.iter().zip(b) {
        acc = acc.add(&ai.mul(bi));
    }
    acc
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance to the next lexicographic k-subset of 0..n.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// H-representation to vertices
// ---------------------------------------------------------------------------

/// All vertices of `{x : V(n)x >= c(n)}` for `n` past the returned
/// threshold, found by solving every eventually-independent `d`-subset of
/// constraint equations and keeping the eventually-feasible solutions.
/// An eventually empty polytope yields an empty vertex list.
pub fn h_to_v(h: &HRep) -> Result<(Vec<ParamVertex>, BigInt)> {
    let d = h.dim();
    let r = h.len();
    let rf_rows: Vec<Vec<RatFunc>> = h
        .rows
        .iter()
        .map(|row| row.iter().map(|p| RatFunc::from_poly(p.clone())).collect())
        .collect();
    let rf_rhs: Vec<RatFunc> = h.rhs.iter().map(|p| RatFunc::from_poly(p.clone())).collect();
    let mut vertices: Vec<ParamVertex> = Vec::new();
    let mut threshold = BigInt::zero();
    for_each_subset(r, d, |subset| {
        let a: Vec<Vec<RatFunc>> = subset.iter().map(|&i| rf_rows[i].clone()).collect();
        let b: Vec<RatFunc> = subset.iter().map(|&i| rf_rhs[i].clone()).collect();
        let Some(v) = solve_square(&a, &b) else { return };
        let mut feasible = true;
        for j in 0..r {
            let slack = dot_poly(&h.rows[j], &v).sub(&rf_rhs[j]);
            let (sign, t) = slack.eventual_sign();
            threshold = threshold.clone().max(t);
            if sign == Sign::Negative {
                feasible = false;
                break;
            }
        }
        if !feasible {
            return;
        }
        for coord in &v {
            threshold = threshold.clone().max(coord.den_nonzero_threshold());
        }
        if !vertices.iter().any(|w| w.coords == v) {
            vertices.push(ParamVertex {
                coords: v,
                index_set: subset.to_vec(),
            });
        }
    });
    Ok((vertices, threshold))
}

// ---------------------------------------------------------------------------
// Vertices to H-representation
// ---------------------------------------------------------------------------

/// Multiply a rational-function functional through by the least common
/// denominator, returning integer-polynomial coefficients, right-hand side,
/// and the threshold past which the multiplier is positive (so the
/// inequality direction is preserved).
fn clear_functional(coeffs: &[RatFunc], rhs: &RatFunc) -> (Vec<IntPoly>, IntPoly, BigInt) {
    let mut m = IntPoly::one();
    for c in coeffs.iter().chain(core::iter::once(rhs)) {
        let g = m.gcd_poly(c.den());
        m = &m * &c.den().exact_div(&g).expect("gcd divides");
    }
    let lift = |c: &RatFunc| -> IntPoly {
        let factor = m.exact_div(c.den()).expect("lcm of denominators");
        c.num() * &factor
    };
    let mut row: Vec<IntPoly> = coeffs.iter().map(lift).collect();
    let mut b = lift(rhs);
    // Make the row primitive with a positive multiplier.
    let mut content = BigInt::zero();
    for p in row.iter().chain(core::iter::once(&b)) {
        content = num_integer::Integer::gcd(&content, &p.content());
    }
    if !content.is_zero() && content != BigInt::from(1) {
        for p in row.iter_mut() {
            *p = p.exact_div_scalar(&content).expect("content divides");
        }
        b = b.exact_div_scalar(&content).expect("content divides");
    }
    let (_, t) = eventual_sign(&m);
    (row, b, t)
}

fn cmp_poly(a: &IntPoly, b: &IntPoly) -> Ordering {
    a.coeffs().cmp(b.coeffs())
}

fn cmp_row(a: &(Vec<IntPoly>, IntPoly), b: &(Vec<IntPoly>, IntPoly)) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        match cmp_poly(x, y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    cmp_poly(&a.1, &b.1)
}

/// Halfspace description of the convex hull of the given points, valid for
/// `n` past the returned threshold. Equalities cutting out the affine hull
/// come first (as pairs of opposite inequalities), then one inequality per
/// facet. Candidate hyperplanes pass through affinely independent vertex
/// subsets and are kept when all vertices lie weakly on one side.
pub fn v_to_h(v: &VRep) -> Result<(HRep, BigInt)> {
    let d = v.dim();
    let s = v.vertices.len();
    let p0 = &v.vertices[0];
    let mut threshold = BigInt::zero();
    let diffs: Vec<Vec<RatFunc>> = v.vertices[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a.sub(b)).collect())
        .collect();

    // Affine hull: equalities from the nullspace of the difference span.
    let normals = nullspace(&diffs, d);
    let rank = d - normals.len();
    let mut eq_rows: Vec<(Vec<IntPoly>, IntPoly)> = Vec::new();
    for a in &normals {
        let b = dot_rf(a, p0);
        let (row, rhs, t) = clear_functional(a, &b);
        threshold = threshold.max(t);
        eq_rows.push((row, rhs));
    }
    eq_rows.sort_by(cmp_row);

    let mut facet_rows: Vec<(Vec<IntPoly>, IntPoly)> = Vec::new();
    if rank >= 1 {
        // Coordinates on the affine hull: pick a basis of difference
        // vectors and a coordinate subset where it is invertible.
        let mut basis_mat: Vec<Vec<RatFunc>> = diffs.clone();
        let pivot_cols = {
            let mut work = diffs.clone();
            echelon(&mut work)
        };
        // Select `rank` independent difference vectors.
        let mut chosen: Vec<usize> = Vec::new();
        {
            let mut acc: Vec<Vec<RatFunc>> = Vec::new();
            for (i, row) in basis_mat.iter().enumerate() {
                let mut trial = acc.clone();
                trial.push(row.clone());
                let mut work = trial.clone();
                if echelon(&mut work).len() > acc.len() {
                    acc = trial;
                    chosen.push(i);
                }
                if chosen.len() == rank {
                    break;
                }
            }
        }
        basis_mat = chosen.iter().map(|&i| diffs[i].clone()).collect();
        // Restrict to the pivot coordinates: rank x rank invertible block.
        let block: Vec<Vec<RatFunc>> = basis_mat
            .iter()
            .map(|row| pivot_cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        // t-coordinates of each vertex: solve block^T missing; we need
        // coefficients t with p = p0 + t * basis, i.e. block^T t = (p-p0)_R.
        let block_t: Vec<Vec<RatFunc>> = (0..rank)
            .map(|i| (0..rank).map(|j| block[j][i].clone()).collect())
            .collect();
        let mut tcoords: Vec<Vec<RatFunc>> = Vec::with_capacity(s);
        for p in &v.vertices {
            let rhs: Vec<RatFunc> = pivot_cols
                .iter()
                .map(|&c| p[c].sub(&p0[c]))
                .collect();
            let t = solve_square(&block_t, &rhs).expect("basis block is invertible");
            tcoords.push(t);
        }
        for_each_subset(s, rank, |subset| {
            let t0 = &tcoords[subset[0]];
            let sub_diffs: Vec<Vec<RatFunc>> = subset[1..]
                .iter()
                .map(|&i| tcoords[i].iter().zip(t0).map(|(a, b)| a.sub(b)).collect())
                .collect();
            let ns = nullspace(&sub_diffs, rank);
            if ns.len() != 1 {
                return;
            }
            let mut alpha = ns.into_iter().next().unwrap();
            let beta = dot_rf(&alpha, t0);
            // Weak-side test over all vertices, orienting toward >=.
            let mut pos = false;
            let mut neg = false;
            let mut on_facet: Vec<usize> = Vec::new();
            let mut local_t = BigInt::zero();
            for (i, t) in tcoords.iter().enumerate() {
                let val = dot_rf(&alpha, t).sub(&beta);
                let (sign, thr) = val.eventual_sign();
                local_t = local_t.max(thr);
                match sign {
                    Sign::Positive => pos = true,
                    Sign::Negative => neg = true,
                    Sign::Zero => on_facet.push(i),
                }
            }
            threshold = threshold.clone().max(local_t);
            if pos && neg {
                return;
            }
            // Facets touch a (rank-1)-dimensional set of vertices.
            let fd: Vec<Vec<RatFunc>> = on_facet[1..]
                .iter()
                .map(|&i| {
                    tcoords[i]
                        .iter()
                        .zip(&tcoords[on_facet[0]])
                        .map(|(a, b)| a.sub(b))
                        .collect()
                })
                .collect();
            let mut work = fd;
            if echelon(&mut work).len() != rank - 1 {
                return;
            }
            let mut beta = beta;
            if neg {
                for a in alpha.iter_mut() {
                    *a = a.neg();
                }
                beta = beta.neg();
            }
            // Pull the functional back to ambient coordinates:
            // l(x) = alpha . t(x) with block^T t = (x - p0)_R, so the
            // ambient coefficients on the pivot coordinates solve
            // block y = alpha.
            let y = solve_square(&block, &alpha).expect("basis block is invertible");
            let mut coeffs = vec![RatFunc::zero(); d];
            for (j, &c) in pivot_cols.iter().enumerate() {
                coeffs[c] = y[j].clone();
            }
            // alpha . t >= beta translates to l(x) >= beta + l(p0).
            let rhs_val = beta.add(&dot_rf(&coeffs, p0));
            let (row, rhs, t) = clear_functional(&coeffs, &rhs_val);
            threshold = threshold.clone().max(t);
            let entry = (row, rhs);
            if !facet_rows.contains(&entry) {
                facet_rows.push(entry);
            }
        });
        facet_rows.sort_by(cmp_row);
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (row, b) in &eq_rows {
        rows.push(row.clone());
        rhs.push(b.clone());
        rows.push(row.iter().map(|p| -p).collect());
        rhs.push(-b);
    }
    for (row, b) in facet_rows {
        rows.push(row);
        rhs.push(b);
    }
    Ok((HRep::new(rows, rhs)?, threshold))
}

// ---------------------------------------------------------------------------
// Boundedness
// ---------------------------------------------------------------------------

/// Whether `{x : V(n)x >= c(n)}` is bounded for all large `n`, decided by
/// intersecting the recession cone `{V(n)x >= 0}` with the unit box and
/// checking that the only vertex is the origin.
pub fn is_eventually_bounded(h: &HRep) -> Result<(bool, BigInt)> {
    let d = h.dim();
    let mut rows: Vec<Vec<IntPoly>> = h.rows.clone();
    let mut rhs: Vec<IntPoly> = vec![IntPoly::zero(); rows.len()];
    for i in 0..d {
        let mut unit = vec![IntPoly::zero(); d];
        unit[i] = IntPoly::one();
        rows.push(unit.clone());
        rhs.push(IntPoly::constant_i64(-1));
        rows.push(unit.into_iter().map(|p| -&p).collect());
        rhs.push(IntPoly::constant_i64(-1));
    }
    let boxed = HRep::new(rows, rhs)?;
    let (vertices, threshold) = h_to_v(&boxed)?;
    let bounded = vertices
        .iter()
        .all(|v| v.coords.iter().all(RatFunc::is_zero));
    Ok((bounded, threshold))
}
