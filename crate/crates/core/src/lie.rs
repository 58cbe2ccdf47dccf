//! Finite-dimensional Lie algebras given by structure constants.
//!
//! Convention: `[e_a, e_b] = c^g_{ab} e_g`, stored densely as `c[g][a][b]`.
//! The modular character is `M_a = Tr(ad_{e_a}) = sum_b c^b_{ab}`.
//!
//! For `sl(2,R)` the basis is `(J3, J+, J-)` with `[J3, J+] = 2J+`,
//! `[J3, J-] = -2J-` and `[J+, J-] = J3`.

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{check_len, PlgError, Result};
use crate::fd::EXACT_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    constants: Vec<f64>,
    labels: Vec<String>,
    antisymmetry_residual: f64,
    jacobi_residual: f64,
}

/// Residuals reported when an algebra is validated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomResiduals {
    pub antisymmetry: f64,
    pub jacobi: f64,
}

impl LieAlgebra {
    /// Builds and validates an algebra from `constants[g][a][b]`.
    pub fn new(constants: Vec<Vec<Vec<f64>>>, labels: Vec<String>) -> Result<Self> {
        Self::with_tolerance(constants, labels, EXACT_TOL)
    }

    pub fn with_tolerance(
        constants: Vec<Vec<Vec<f64>>>,
        labels: Vec<String>,
        tol: f64,
    ) -> Result<Self> {
        let dim = constants.len();
        if dim == 0 {
            return Err(PlgError::Invalid("Lie algebra of dimension 0".into()));
        }
        check_len(dim, labels.len())?;
        let mut flat = Vec::with_capacity(dim * dim * dim);
        for plane in &constants {
            check_len(dim, plane.len())?;
            for row in plane {
                check_len(dim, row.len())?;
                flat.extend_from_slice(row);
            }
        }
        Self::from_flat(dim, flat, labels, tol)
    }

    pub(crate) fn from_flat(
        dim: usize,
        constants: Vec<f64>,
        labels: Vec<String>,
        tol: f64,
    ) -> Result<Self> {
        check_len(dim * dim * dim, constants.len())?;
        let mut alg = LieAlgebra {
            dim,
            constants,
            labels,
            antisymmetry_residual: 0.0,
            jacobi_residual: 0.0,
        };
        let res = alg.axiom_residuals();
        alg.antisymmetry_residual = res.antisymmetry;
        alg.jacobi_residual = res.jacobi;
        if res.antisymmetry > tol {
            return Err(PlgError::Antisymmetry {
                residual: res.antisymmetry,
                tol,
            });
        }
        if res.jacobi > tol {
            return Err(PlgError::Jacobi {
                residual: res.jacobi,
                tol,
            });
        }
        Ok(alg)
    }

    /// Builds an algebra from a list of nonzero brackets `[e_a, e_b] = out`;
    /// the opposite ordering is filled in by antisymmetry.
    pub fn from_brackets(
        labels: &[&str],
        brackets: &[(usize, usize, Vec<f64>)],
    ) -> Result<Self> {
        let dim = labels.len();
        let mut c = vec![0.0; dim * dim * dim];
        for (a, b, out) in brackets {
            check_len(dim, out.len())?;
            if *a >= dim || *b >= dim {
                return Err(PlgError::Invalid(format!(
                    "bracket index ({a}, {b}) out of range for dimension {dim}"
                )));
            }
            for (g, v) in out.iter().enumerate() {
                c[(g * dim + a) * dim + b] = *v;
                c[(g * dim + b) * dim + a] = -*v;
            }
        }
        Self::from_flat(
            dim,
            c,
            labels.iter().map(|s| s.to_string()).collect(),
            EXACT_TOL,
        )
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            constants: vec![0.0; dim * dim * dim],
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            antisymmetry_residual: 0.0,
            jacobi_residual: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c^g_{ab}`.
    pub fn c(&self, g: usize, a: usize, b: usize) -> f64 {
        self.constants[(g * self.dim + a) * self.dim + b]
    }

    pub fn residuals(&self) -> AxiomResiduals {
        AxiomResiduals {
            antisymmetry: self.antisymmetry_residual,
            jacobi: self.jacobi_residual,
        }
    }

    fn axiom_residuals(&self) -> AxiomResiduals {
        let n = self.dim;
        let mut anti: f64 = 0.0;
        for g in 0..n {
            for a in 0..n {
                for b in 0..n {
                    anti = anti.max((self.c(g, a, b) + self.c(g, b, a)).abs());
                }
            }
        }
        let mut jac: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    for d in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.c(m, a, b) * self.c(d, m, g)
                                + self.c(m, b, g) * self.c(d, m, a)
                                + self.c(m, g, a) * self.c(d, m, b);
                        }
                        jac = jac.max(s.abs());
                    }
                }
            }
        }
        AxiomResiduals {
            antisymmetry: anti,
            jacobi: jac,
        }
    }

    pub fn bracket(&self, xi: &[f64], eta: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, xi.len())?;
        check_len(self.dim, eta.len())?;
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (g, o) in out.iter_mut().enumerate() {
            for a in 0..n {
                if xi[a] == 0.0 {
                    continue;
                }
                for b in 0..n {
                    *o += self.c(g, a, b) * xi[a] * eta[b];
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_xi`: `(ad_xi)[g][b] = sum_a c^g_{ab} xi_a`.
    pub fn ad_matrix(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        check_len(self.dim, xi.len())?;
        let n = self.dim;
        Ok(DMatrix::from_fn(n, n, |g, b| {
            (0..n).map(|a| self.c(g, a, b) * xi[a]).sum()
        }))
    }

    /// Covector `a -> Tr(ad_{e_a})`.
    pub fn modular_character(&self) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|a| (0..n).map(|b| self.c(b, a, b)).sum())
            .collect()
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.modular_character().iter().all(|m| m.abs() <= tol)
    }

    /// Algebraic Schouten bracket on `wedge^* g`.
    ///
    /// For basis wedges this is
    /// `[x_1..x_k, y_1..y_l] = sum_{i,j} (-1)^{i+j} [x_i, y_j] x_1..^i..x_k y_1..^j..y_l`.
    pub fn schouten(&self, p: &Multivector, q: &Multivector) -> Result<Multivector> {
        check_len(self.dim, p.dim())?;
        check_len(self.dim, q.dim())?;
        let (k, l) = (p.degree(), q.degree());
        if k == 0 || l == 0 {
            return Err(PlgError::Degree {
                degree: k.min(l),
                reason: "Schouten bracket needs degrees >= 1".into(),
            });
        }
        if k + l - 1 > self.dim {
            return Err(PlgError::Degree {
                degree: k + l - 1,
                reason: format!("exceeds algebra dimension {}", self.dim),
            });
        }
        let n = self.dim;
        let mut out = Multivector::zero(n, k + l - 1);
        let basis: Vec<Vec<f64>> = (0..n).map(|i| unit(n, i)).collect();
        for (xs, pc) in p.basis_expansion() {
            for (ys, qc) in q.basis_expansion() {
                let coeff = pc * qc;
                for i in 0..k {
                    for j in 0..l {
                        let br = self.bracket(&basis[xs[i]], &basis[ys[j]])?;
                        if br.iter().all(|v| *v == 0.0) {
                            continue;
                        }
                        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                        let mut factors: Vec<Vec<f64>> = vec![br];
                        factors.extend(
                            xs.iter()
                                .enumerate()
                                .filter(|(a, _)| *a != i)
                                .map(|(_, &x)| basis[x].clone()),
                        );
                        factors.extend(
                            ys.iter()
                                .enumerate()
                                .filter(|(b, _)| *b != j)
                                .map(|(_, &y)| basis[y].clone()),
                        );
                        let term = Multivector::wedge_vectors(n, &factors);
                        out.add_scaled(&term, sign * coeff);
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// An element of `wedge^k g`, stored as a fully antisymmetric `k`-index array
/// over the basis, normalised so that `e_1 ^ e_2` has components
/// `P^{12} = 1`, `P^{21} = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    degree: usize,
    comps: Vec<f64>,
}

impl Multivector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Multivector {
            dim,
            degree,
            comps: vec![0.0; dim.pow(degree as u32)],
        }
    }

    pub fn vector(v: &[f64]) -> Self {
        Multivector {
            dim: v.len(),
            degree: 1,
            comps: v.to_vec(),
        }
    }

    pub fn basis_vector(dim: usize, i: usize) -> Self {
        Self::vector(&unit(dim, i))
    }

    /// Bivector from `(i, j, coeff)` triples meaning `coeff * e_i ^ e_j`.
    pub fn bivector(dim: usize, terms: &[(usize, usize, f64)]) -> Result<Self> {
        let mut m = Self::zero(dim, 2);
        for &(i, j, c) in terms {
            if i >= dim || j >= dim {
                return Err(PlgError::Invalid(format!(
                    "bivector index ({i}, {j}) out of range for dimension {dim}"
                )));
            }
            m.comps[i * dim + j] += c;
            m.comps[j * dim + i] -= c;
        }
        Ok(m)
    }

    /// Bivector from a full antisymmetric matrix of components.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        Multivector {
            dim: n,
            degree: 2,
            comps: (0..n * n).map(|k| m[(k / n, k % n)]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Option<DMatrix<f64>> {
        (self.degree == 2)
            .then(|| DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.comps[self.offset(idx)]
    }

    pub fn max_abs(&self) -> f64 {
        crate::fd::max_abs(&self.comps)
    }

    /// Largest violation of antisymmetry under adjacent transpositions.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in all_indices(self.dim, self.degree) {
            for s in 0..self.degree.saturating_sub(1) {
                let mut t = idx.clone();
                t.swap(s, s + 1);
                worst = worst.max((self.get(&idx) + self.get(&t)).abs());
            }
        }
        worst
    }

    pub fn add_scaled(&mut self, other: &Multivector, s: f64) {
        debug_assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            *a += s * b;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.comps.iter_mut().for_each(|c| *c *= s);
        m
    }

    /// Coefficients on the basis wedges `e_{i_1} ^ ... ^ e_{i_k}` with
    /// `i_1 < ... < i_k`; zero coefficients are skipped.
    pub fn basis_expansion(&self) -> Vec<(Vec<usize>, f64)> {
        increasing_indices(self.dim, self.degree)
            .into_iter()
            .map(|idx| {
                let v = self.get(&idx);
                (idx, v)
            })
            .filter(|(_, v)| *v != 0.0)
            .collect()
    }

    /// `v_1 ^ ... ^ v_k` of plain vectors.
    pub fn wedge_vectors(dim: usize, factors: &[Vec<f64>]) -> Self {
        let k = factors.len();
        let mut m = Self::zero(dim, k);
        let perms = permutations(k);
        for idx in all_indices(dim, k) {
            let mut s = 0.0;
            for (perm, sign) in &perms {
                let mut prod = *sign;
                for (slot, &f) in perm.iter().enumerate() {
                    prod *= factors[f][idx[slot]];
                    if prod == 0.0 {
                        break;
                    }
                }
                s += prod;
            }
            let off = m.offset(&idx);
            m.comps[off] = s;
        }
        m
    }

    /// Exterior product of two multivectors.
    pub fn wedge(&self, other: &Multivector) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let (k, l) = (self.degree, other.degree);
        let mut out = Self::zero(self.dim, k + l);
        let perms = permutations(k + l);
        let norm = (factorial(k) * factorial(l)) as f64;
        for idx in all_indices(self.dim, k + l) {
            let mut s = 0.0;
            for (perm, sign) in &perms {
                let permuted: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
                s += sign * self.get(&permuted[..k]) * other.get(&permuted[k..]);
            }
            let off = out.offset(&idx);
            out.comps[off] = s / norm;
        }
        out
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub(crate) fn all_indices(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..dim).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

fn increasing_indices(dim: usize, k: usize) -> Vec<Vec<usize>> {
    all_indices(dim, k)
        .into_iter()
        .filter(|idx| idx.windows(2).all(|w| w[0] < w[1]))
        .collect()
}

/// All permutations of `0..k` with their signs.
fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let mut inversions = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

/// Registry of the algebras used by the built-in models.
///
/// Names: `sl2`, `gl2`, `su2_quaternion`, `quaternion`, `so3`, `book` (eta),
/// `b2xb2` (eta), `affine2d`, `abelian` (n), and the shorthand `abelianN`.
pub fn standard_algebra(name: &str, params: &[f64]) -> Result<LieAlgebra> {
    let param = |i: usize, what: &str| -> Result<f64> {
        params
            .get(i)
            .copied()
            .ok_or_else(|| PlgError::Invalid(format!("algebra `{name}` needs parameter {what}")))
    };
    match name {
        "sl2" => LieAlgebra::from_brackets(
            &["J3", "J+", "J-"],
            &[
                (0, 1, vec![0.0, 2.0, 0.0]),
                (0, 2, vec![0.0, 0.0, -2.0]),
                (1, 2, vec![1.0, 0.0, 0.0]),
            ],
        ),
        "gl2" => LieAlgebra::from_brackets(
            &["J3", "J+", "J-", "Id/2"],
            &[
                (0, 1, vec![0.0, 2.0, 0.0, 0.0]),
                (0, 2, vec![0.0, 0.0, -2.0, 0.0]),
                (1, 2, vec![1.0, 0.0, 0.0, 0.0]),
            ],
        ),
        "su2_quaternion" => LieAlgebra::from_brackets(
            &["e2", "e3", "e4"],
            &[
                (0, 1, vec![0.0, 0.0, -2.0]),
                (0, 2, vec![0.0, 2.0, 0.0]),
                (1, 2, vec![-2.0, 0.0, 0.0]),
            ],
        ),
        "quaternion" => LieAlgebra::from_brackets(
            &["e1", "e2", "e3", "e4"],
            &[
                (1, 2, vec![0.0, 0.0, 0.0, -2.0]),
                (1, 3, vec![0.0, 0.0, 2.0, 0.0]),
                (2, 3, vec![0.0, -2.0, 0.0, 0.0]),
            ],
        ),
        "so3" => LieAlgebra::from_brackets(
            &["e1", "e2", "e3"],
            &[
                (0, 1, vec![0.0, 0.0, 1.0]),
                (1, 2, vec![1.0, 0.0, 0.0]),
                (2, 0, vec![0.0, 1.0, 0.0]),
            ],
        ),
        "book" => {
            let eta = param(0, "eta")?;
            LieAlgebra::from_brackets(
                &["X", "Y", "Z"],
                &[(0, 1, vec![0.0, -eta, 0.0]), (0, 2, vec![0.0, 0.0, -eta])],
            )
        }
        "b2xb2" => {
            let eta = param(0, "eta")?;
            LieAlgebra::from_brackets(
                &["X", "Y", "Z", "W"],
                &[
                    (0, 2, vec![eta, 0.0, 0.0, 0.0]),
                    (0, 3, vec![eta, eta, 0.0, 0.0]),
                    (1, 2, vec![0.0, eta, 0.0, 0.0]),
                    (1, 3, vec![0.5 * eta, eta, 0.0, 0.0]),
                ],
            )
        }
        "affine2d" => LieAlgebra::from_brackets(&["X", "Y"], &[(0, 1, vec![0.0, 1.0])]),
        "abelian" => {
            let n = param(0, "n")?;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(PlgError::Invalid(format!("abelian dimension {n}")));
            }
            Ok(LieAlgebra::abelian(n as usize))
        }
        other => match other.strip_prefix("abelian").map(str::parse::<usize>) {
            Some(Ok(n)) if n >= 1 => Ok(LieAlgebra::abelian(n)),
            _ => Err(PlgError::Unknown {
                kind: "algebra",
                name: other.to_string(),
            }),
        },
    }
}

/// JSON description of a user algebra:
/// `{"dim": n, "labels": [...], "brackets": [{"a": i, "b": j, "out": [...]}]}`.
#[derive(Debug, Clone, Deserialize)]
pub struct AlgebraSpec {
    pub dim: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BracketEntry {
    pub a: usize,
    pub b: usize,
    pub out: Vec<f64>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<LieAlgebra> {
        let labels: Vec<String> = if self.labels.is_empty() {
            (1..=self.dim).map(|i| format!("e{i}")).collect()
        } else {
            check_len(self.dim, self.labels.len())?;
            self.labels.clone()
        };
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let brackets: Vec<(usize, usize, Vec<f64>)> = self
            .brackets
            .iter()
            .map(|b| (b.a, b.b, b.out.clone()))
            .collect();
        LieAlgebra::from_brackets(&refs, &brackets)
    }
}
