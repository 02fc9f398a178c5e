//! Atiyah's indecomposable unipotent bundles `F_r` and decomposition of unipotent
//! bundles into them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::cech::{
    cohomology, h0, h1, h1_cokernel_representatives, CechBundle, Cover, Func, FuncMatrix,
};
use crate::error::{Error, Result};
use crate::gf::{FiniteField, Fq, FqMatrix, FqPolynomial};

/// A bundle with upper unitriangular transition and zero twists.
#[derive(Clone, Debug)]
pub struct UnipotentBundle {
    underlying: CechBundle,
}

impl UnipotentBundle {
    pub fn new(underlying: CechBundle) -> Result<Self> {
        if !underlying.is_upper_unitriangular() {
            return Err(Error::NotUnipotent(
                "transition is not upper unitriangular".into(),
            ));
        }
        Ok(UnipotentBundle { underlying })
    }

    pub fn bundle(&self) -> &CechBundle {
        &self.underlying
    }

    pub fn rank(&self) -> usize {
        self.underlying.rank()
    }
}

/// Multiset of ranks `r_i` with `U = sum F_{r_i}`, kept in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecompositionType {
    parts: Vec<usize>,
}

impl DecompositionType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable();
        DecompositionType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl fmt::Display for DecompositionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Extends `prev` by `O` with extension cocycle `c` placed in the last column.
fn extend_by_trivial(prev: &CechBundle, c: &[Func]) -> Result<CechBundle> {
    let ring = prev.ring();
    let n = prev.rank();
    let t = prev.transition();
    let ti = prev.inverse_transition();
    let mut big_t: FuncMatrix = vec![vec![Func::zero(); n + 1]; n + 1];
    let mut big_ti = big_t.clone();
    for i in 0..n {
        for j in 0..n {
            big_t[i][j] = t[i][j].clone();
            big_ti[i][j] = ti[i][j].clone();
        }
        big_t[i][n] = c[i].clone();
        // last column of the inverse is -T^-1 c
        let v = ti[i]
            .iter()
            .zip(c)
            .fold(Func::zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)));
        big_ti[i][n] = ring.neg(&v);
    }
    big_t[n][n] = Func::one();
    big_ti[n][n] = Func::one();
    CechBundle::from_transition_and_inverse(prev.cover(), big_t, big_ti, vec![0; n + 1])
}

/// How the extension cocycle is chosen at each step of [`make_fr_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionChoice {
    /// Scalar multiplying the first cokernel representative.
    pub scalar: Fq,
    /// Add the constant function 1 (a `U2`-coboundary) to the cocycle.
    pub add_coboundary: bool,
}

impl ExtensionChoice {
    pub const STANDARD: ExtensionChoice = ExtensionChoice {
        scalar: Fq::ONE,
        add_coboundary: false,
    };
}

/// `F_r` as an iterated nonsplit extension `0 -> F_{k-1} -> F_k -> O -> 0`, each class
/// given by the first cokernel representative of `H^1(F_{k-1})`.
pub fn make_fr(cover: &Cover, r: usize) -> Result<UnipotentBundle> {
    make_fr_with(cover, r, ExtensionChoice::STANDARD)
}

pub fn make_fr_with(cover: &Cover, r: usize, choice: ExtensionChoice) -> Result<UnipotentBundle> {
    if r == 0 {
        return Err(Error::InvalidInput("rank must be at least 1".into()));
    }
    if choice.scalar.is_zero() {
        return Err(Error::InvalidInput(
            "extension scalar must be nonzero".into(),
        ));
    }
    let mut cur = CechBundle::trivial(cover, 1);
    for k in 1..r {
        let reps = h1_cokernel_representatives(&cur);
        let &(i, j, e) = reps
            .first()
            .ok_or_else(|| Error::ExtensionFailed(format!("H^1(F_{k}) has no representative")))?;
        let mut c = vec![Func::zero(); k];
        c[i] = Func::monomial(choice.scalar, j, e);
        if choice.add_coboundary {
            c[i] = cover.ring().add(&c[i], &Func::one());
        }
        cur = extend_by_trivial(&cur, &c)?;
    }
    let h = h0(&cur);
    if h != 1 {
        return Err(Error::ExtensionFailed(format!(
            "constructed rank {r} bundle has h0 = {h}"
        )));
    }
    UnipotentBundle::new(cur)
}

/// Memoises `F_r` and the numbers `h0(F_a (x) F_s)` for one cover.
pub struct UnipotentEngine {
    cover: Cover,
    fr: Mutex<HashMap<usize, UnipotentBundle>>,
    pair: Mutex<HashMap<(usize, usize), usize>>,
}

impl UnipotentEngine {
    pub fn new(cover: &Cover) -> Self {
        UnipotentEngine {
            cover: cover.clone(),
            fr: Mutex::new(HashMap::new()),
            pair: Mutex::new(HashMap::new()),
        }
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn fr(&self, r: usize) -> Result<UnipotentBundle> {
        if let Some(b) = self.fr.lock().unwrap().get(&r) {
            return Ok(b.clone());
        }
        let b = make_fr(&self.cover, r)?;
        self.fr.lock().unwrap().insert(r, b.clone());
        Ok(b)
    }

    /// `h0(F_a (x) F_s)`, symmetric in `a, s`.
    pub fn pair_h0(&self, a: usize, s: usize) -> Result<usize> {
        let key = (a.min(s), a.max(s));
        if let Some(&v) = self.pair.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = h0(&self.fr(key.0)?.bundle().tensor(self.fr(key.1)?.bundle())?);
        self.pair.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// `h0(U (x) F_s)` for `s = 1..=len`.
    pub fn profile(&self, u: &UnipotentBundle, len: usize) -> Result<Vec<usize>> {
        (1..=len)
            .map(|s| Ok(h0(&u.bundle().tensor(self.fr(s)?.bundle())?)))
            .collect()
    }

    fn candidate_value(&self, parts: &[usize], s: usize) -> Result<usize> {
        parts.iter().map(|&a| self.pair_h0(a, s)).sum()
    }

    /// Decomposition type of `u`.
    ///
    /// The number of parts is `h0(u)`. Candidate partitions with that many parts are
    /// filtered by `h0(u (x) F_s)` for `s = 2, 3, ...`, stopping as soon as one
    /// candidate is left. If several survive all `s <= rank`, the endomorphism algebra
    /// is split by idempotents instead.
    pub fn decomposition_type(&self, u: &UnipotentBundle) -> Result<DecompositionType> {
        let n = u.rank();
        let k = h0(u.bundle());
        let mut candidates = partitions(n, k);
        if candidates.is_empty() {
            return Err(Error::Decomposition(format!(
                "no partition of {n} into {k} parts"
            )));
        }
        let mut s = 2;
        while candidates.len() > 1 && s <= n {
            let value = h0(&u.bundle().tensor(self.fr(s)?.bundle())?);
            let mut kept = Vec::new();
            for c in candidates {
                if self.candidate_value(&c, s)? == value {
                    kept.push(c);
                }
            }
            candidates = kept;
            s += 1;
        }
        match candidates.len() {
            0 => Err(Error::Decomposition(
                "no candidate matches the invariant profile".into(),
            )),
            1 => Ok(DecompositionType::new(candidates.pop().unwrap())),
            _ => idempotent_decomposition(u),
        }
    }
}

/// Partitions of `n` into exactly `k` positive parts, parts in decreasing order.
pub fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if n < k {
            return;
        }
        for part in (1..=max.min(n - (k - 1))).rev() {
            prefix.push(part);
            rec(n - part, k - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, n, &mut Vec::new(), &mut out);
    out
}

/// Values at O of a basis of `End(U) = H^0(U^dual (x) U)`, as `r x r` matrices.
///
/// For a unipotent bundle every nonzero endomorphism is nonzero at every point, so
/// evaluation at O is a faithful representation of the endomorphism algebra.
pub fn endomorphism_algebra_at_origin(u: &UnipotentBundle) -> Result<Vec<FqMatrix>> {
    let r = u.rank();
    let end = u.bundle().dual().tensor(u.bundle())?;
    let res = cohomology(&end, None)?;
    Ok(res
        .sections
        .iter()
        .map(|s| {
            let mut m = FqMatrix::zeros(r, r);
            // component (i, k) of U^dual (x) U is the entry sending e_i to e_k
            for i in 0..r {
                for k in 0..r {
                    m.set(k, i, s.chart2[i * r + k].coeff(0, 0));
                }
            }
            m
        })
        .collect())
}

/// `a + c * b`
fn mat_add(f: &FiniteField, a: &FqMatrix, b: &FqMatrix, c: Fq) -> FqMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, f.mul_add(a.get(i, j), c, b.get(i, j)));
        }
    }
    out
}

fn poly_of_matrix(f: &FiniteField, p: &FqPolynomial, m: &FqMatrix) -> FqMatrix {
    let n = m.rows();
    let mut acc = FqMatrix::zeros(n, n);
    for &c in p.coeffs().iter().rev() {
        acc = acc.mul(f, m).expect("square");
        acc = mat_add(f, &acc, &FqMatrix::identity(n), c);
    }
    acc
}

/// Minimal polynomial of a square matrix by Krylov dependence of its powers.
pub fn minimal_polynomial(f: &FiniteField, m: &FqMatrix) -> FqPolynomial {
    let n = m.rows();
    let flat = |a: &FqMatrix| -> Vec<Fq> { (0..n).flat_map(|i| a.row(i).to_vec()).collect() };
    let mut powers = vec![flat(&FqMatrix::identity(n))];
    let mut cur = FqMatrix::identity(n);
    loop {
        cur = cur.mul(f, m).expect("square");
        let target = flat(&cur);
        let cols: Vec<Vec<(usize, Fq)>> = powers
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, &c)| (i, c))
                    .collect()
            })
            .collect();
        let a = FqMatrix::from_sparse_columns(n * n, &cols);
        if let Ok(Some(sol)) = a.solve(f, &target) {
            let mut coeffs: Vec<Fq> = sol.iter().map(|&c| f.neg(c)).collect();
            coeffs.push(Fq::ONE);
            return FqPolynomial::new(coeffs);
        }
        powers.push(target);
    }
}

/// Lowest-degree monic factor of `m` (hence irreducible), by trial division.
fn irreducible_factor(f: &FiniteField, m: &FqPolynomial) -> Option<FqPolynomial> {
    let deg = m.degree()?;
    let q = f.order() as u64;
    for d in 1..=deg {
        let count = q.checked_pow(d as u32)?;
        for code in 0..count {
            let mut c = code;
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push(f.element((c % q) as u32));
                c /= q;
            }
            coeffs.push(Fq::ONE);
            let cand = FqPolynomial::new(coeffs);
            if cand.divides(f, m) {
                return Some(cand);
            }
        }
    }
    None
}

/// A nontrivial idempotent polynomial in `m` when its minimal polynomial has two
/// coprime factors (Fitting decomposition).
fn fitting_idempotent(f: &FiniteField, m: &FqMatrix) -> Option<FqMatrix> {
    let mp = minimal_polynomial(f, m);
    let g = irreducible_factor(f, &mp)?;
    let mut primary = FqPolynomial::one();
    let mut rest = mp.clone();
    while g.divides(f, &rest) {
        rest = rest.div_rem(f, &g).ok()?.0;
        primary = primary.mul(f, &g);
    }
    if rest.degree() == Some(0) {
        return None;
    }
    // s * rest + t * primary = 1, so s * rest is 1 on the g-primary part and 0 elsewhere
    let (_, s, _) = rest.xgcd(f, &primary);
    let e = s.mul(f, &rest).rem(f, &mp).ok()?;
    Some(poly_of_matrix(f, &e, m))
}

/// Decomposition type from a complete set of primitive orthogonal idempotents of
/// `End(U)`, found by splitting corner algebras `e End(U) e`.
pub fn idempotent_decomposition(u: &UnipotentBundle) -> Result<DecompositionType> {
    let basis = endomorphism_algebra_at_origin(u)?;
    let f = u.bundle().ring().field().clone();
    let r = u.rank();
    let mut pending = vec![FqMatrix::identity(r)];
    let mut primitive = Vec::new();
    while let Some(e) = pending.pop() {
        let corner: Vec<FqMatrix> = basis
            .iter()
            .map(|b| e.mul(&f, b).and_then(|x| x.mul(&f, &e)))
            .collect::<Result<_>>()?;
        match split_corner(&f, &e, &corner)? {
            Some((e1, e2)) => {
                pending.push(e1);
                pending.push(e2);
            }
            None => primitive.push(e),
        }
    }
    if primitive.len() != h0(u.bundle()) {
        return Err(Error::Decomposition(format!(
            "found {} primitive idempotents but h0 = {}",
            primitive.len(),
            h0(u.bundle())
        )));
    }
    Ok(DecompositionType::new(
        primitive.iter().map(|e| e.rank(&f)).collect(),
    ))
}

/// Splits `e = e1 + e2` using an element of the corner algebra, trying basis
/// elements, then pairwise combinations `a + c b`.
fn split_corner(
    f: &FiniteField,
    e: &FqMatrix,
    corner: &[FqMatrix],
) -> Result<Option<(FqMatrix, FqMatrix)>> {
    let try_elem = |a: &FqMatrix| -> Option<(FqMatrix, FqMatrix)> {
        // a = e a e commutes with e, so e * p(a) is again an idempotent
        let idem = fitting_idempotent(f, a)?;
        let e1 = e.mul(f, &idem).ok()?;
        let rank_e1 = e1.rank(f);
        if rank_e1 == 0 || rank_e1 == e.rank(f) {
            return None;
        }
        let e2 = mat_add(f, e, &e1, f.neg(Fq::ONE));
        Some((e1, e2))
    };
    for a in corner {
        if let Some(s) = try_elem(a) {
            return Ok(Some(s));
        }
    }
    for (i, a) in corner.iter().enumerate() {
        for b in &corner[i + 1..] {
            for c in f.elements().skip(1) {
                if let Some(s) = try_elem(&mat_add(f, b, a, c)) {
                    return Ok(Some(s));
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of building `F_r` along two different extension choices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    pub rank: usize,
    pub first_route: Vec<usize>,
    pub second_route: Vec<usize>,
    pub h1_first: usize,
    pub h1_second: usize,
}

/// Second extension choice: scalar `-1` in odd characteristic, a generator of the
/// multiplicative group over larger fields of characteristic 2, and over GF(2) the
/// representative plus a coboundary.
pub fn alternative_choice(f: &FiniteField) -> ExtensionChoice {
    if f.characteristic() != 2 {
        ExtensionChoice {
            scalar: f.neg(Fq::ONE),
            add_coboundary: false,
        }
    } else if f.order() > 2 {
        ExtensionChoice {
            scalar: f.generator_root(),
            add_coboundary: false,
        }
    } else {
        ExtensionChoice {
            scalar: Fq::ONE,
            add_coboundary: true,
        }
    }
}

/// Builds `F_r` twice and compares `h0`, `h1` and `h0(. (x) F_s)` for `s <= r`.
pub fn verify_atiyah_uniqueness(engine: &UnipotentEngine, r: usize) -> Result<UniquenessReport> {
    let cover = engine.cover();
    let a = engine.fr(r)?;
    let b = make_fr_with(cover, r, alternative_choice(cover.ring().field()))?;
    let mut pa = vec![h0(a.bundle())];
    pa.extend(engine.profile(&a, r)?);
    let mut pb = vec![h0(b.bundle())];
    pb.extend(engine.profile(&b, r)?);
    let report = UniquenessReport {
        rank: r,
        first_route: pa,
        second_route: pb,
        h1_first: h1(a.bundle()),
        h1_second: h1(b.bundle()),
    };
    if report.first_route != report.second_route || report.h1_first != report.h1_second {
        return Err(Error::ProfileMismatch(r));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::{h1_generator, TwoChartCover};
    use crate::elliptic::WeierstrassCurve;
    use crate::gf::FiniteField;

    fn cover(p: u32, a: [i64; 5]) -> Cover {
        TwoChartCover::new(&WeierstrassCurve::from_ints(FiniteField::prime(p).unwrap(), a).unwrap())
    }

    #[test]
    fn partitions_count() {
        assert_eq!(partitions(5, 2), vec![vec![4, 1], vec![3, 2]]);
        assert_eq!(partitions(6, 3).len(), 3);
        assert!(partitions(2, 3).is_empty());
    }

    #[test]
    fn f2_uses_the_h1_generator() {
        let c = cover(3, [0, 0, 0, 1, 1]);
        let f2 = make_fr(&c, 2).unwrap();
        assert_eq!(f2.bundle().transition()[0][1], h1_generator(&c));
    }

    #[test]
    fn small_types() {
        let c = cover(2, [1, 0, 0, 0, 1]);
        let eng = UnipotentEngine::new(&c);
        let o2 = UnipotentBundle::new(CechBundle::trivial(&c, 2)).unwrap();
        assert_eq!(eng.decomposition_type(&o2).unwrap().parts(), &[1, 1]);
        let f2 = eng.fr(2).unwrap();
        assert_eq!(eng.decomposition_type(&f2).unwrap().parts(), &[2]);
    }

    #[test]
    fn idempotent_route_on_direct_sums() {
        let c = cover(3, [0, 0, 0, 1, 1]);
        let eng = UnipotentEngine::new(&c);
        let u = eng
            .fr(2)
            .unwrap()
            .bundle()
            .direct_sum(eng.fr(1).unwrap().bundle())
            .unwrap();
        let u = UnipotentBundle::new(u).unwrap();
        assert_eq!(idempotent_decomposition(&u).unwrap().parts(), &[1, 2]);
    }

    #[test]
    fn minimal_polynomial_of_projection() {
        let f = FiniteField::prime(5).unwrap();
        let mut m = FqMatrix::zeros(2, 2);
        m.set(0, 0, Fq::ONE);
        // x^2 - x
        assert_eq!(
            minimal_polynomial(&f, &m),
            FqPolynomial::new(vec![Fq::ZERO, f.from_int(-1), Fq::ONE])
        );
    }
}
