//! Finite-dimensional numeric representations of presentations.

mod mat;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::Character;
use crate::multigraph::{Multigraph, Slot};
use crate::ncalg::{Family, GeneratorId, NCPolynomial};
use crate::presentation::{EdgeMatrix, Presentation};
use crate::scalar::{Coefficient, Real};

pub use mat::Mat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("witness needs a complete underlying graph on four vertices with uniform multiplicity at least 2")]
    UnsupportedUnderlyingGraph,
    #[error("models have different index sets or dimensions")]
    IncompatibleModels,
    #[error("malformed model: {0}")]
    Malformed(String),
}

/// A matrix for every generator over an index set of slots.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModel<T> {
    dim: usize,
    slots: Vec<Slot>,
    /// Row-major over `(row slot, column slot)`.
    entries: Vec<Mat<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    DirectSum,
    /// `M(q^x_y) = Σ_z A(q^x_z) ⊗ B(q^z_y)`.
    Tensor,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassDeviation {
    pub class: &'static str,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationViolationReport {
    pub tolerance: f64,
    pub classes: Vec<ClassDeviation>,
}

impl RelationViolationReport {
    pub fn passes(&self) -> bool {
        self.classes.iter().all(|c| c.deviation <= self.tolerance)
    }

    pub fn max_deviation(&self) -> f64 {
        self.classes.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    pub fn violated(&self) -> Vec<&'static str> {
        self.classes
            .iter()
            .filter(|c| c.deviation > self.tolerance)
            .map(|c| c.class)
            .collect()
    }

    pub fn deviation(&self, class: &str) -> Option<f64> {
        self.classes.iter().find(|c| c.class == class).map(|c| c.deviation)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeDeviation {
    pub biunitary: f64,
    pub magic: f64,
    /// Largest `‖e² − e‖` over edge-matrix entries and where it occurs.
    pub worst_idempotent: f64,
    pub worst_entry: (usize, usize),
}

impl<T: Real> MatrixModel<T> {
    pub fn new(dim: usize, slots: Vec<Slot>, entries: Vec<Mat<T>>) -> Result<Self, ModelError> {
        if entries.len() != slots.len() * slots.len() {
            return Err(ModelError::DimensionMismatch("entry count".into()));
        }
        if entries.iter().any(|m| m.dim() != dim) {
            return Err(ModelError::DimensionMismatch("matrix size".into()));
        }
        Ok(MatrixModel { dim, slots, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    fn index(&self, s: Slot) -> Option<usize> {
        self.slots.iter().position(|&x| x == s)
    }

    /// The matrix of `g`; generators outside the index set are zero.
    pub fn get(&self, g: GeneratorId) -> Mat<T> {
        match (self.index(g.row), self.index(g.col)) {
            (Some(r), Some(c)) => self.entries[r * self.slots.len() + c].clone(),
            _ => Mat::zeros(self.dim),
        }
    }

    pub fn set(&mut self, g: GeneratorId, m: Mat<T>) {
        let (r, c) = (self.index(g.row).expect("row slot"), self.index(g.col).expect("column slot"));
        let n = self.slots.len();
        self.entries[r * n + c] = m;
    }

    pub fn evaluate<C: Coefficient>(&self, p: &NCPolynomial<C>) -> Mat<T> {
        let mut acc = Mat::zeros(self.dim);
        for (w, c) in p.terms() {
            let coef = T::from_f64(c.to_f64().expect("finite coefficient")).expect("representable");
            let mut m = Mat::identity(self.dim);
            for &g in &w.0 {
                m = &m * &self.get(g);
            }
            acc = &acc + &m.scale(Complex::new(coef, T::zero()));
        }
        acc
    }

    /// `U M U*` applied to every generator.
    pub fn conjugate(&self, u: &Mat<T>) -> Self {
        let ua = u.adjoint();
        MatrixModel {
            dim: self.dim,
            slots: self.slots.clone(),
            entries: self.entries.iter().map(|m| &(u * m) * &ua).collect(),
        }
    }
}

fn dev<T: Real>(m: &Mat<T>) -> f64 {
    m.frobenius().to_f64().unwrap_or(f64::INFINITY)
}

/// Deviation of every relation class, in Frobenius norm.
pub fn check_relations<T: Real, C: Coefficient>(
    m: &MatrixModel<T>,
    p: &Presentation<C>,
    tol: f64,
) -> Result<RelationViolationReport, ModelError> {
    if m.slots() != p.slots() {
        return Err(ModelError::DimensionMismatch("index sets differ".into()));
    }
    let gens = p.generators();
    let rules = p.rules();
    let mut self_adjoint: f64 = 0.0;
    let mut idempotent: f64 = 0.0;
    for &g in &gens {
        let a = m.get(g);
        self_adjoint = self_adjoint.max(dev(&(&a.adjoint() - &a)));
        idempotent = idempotent.max(dev(&(&(&a * &a) - &a)));
    }
    let mut orthogonal: f64 = 0.0;
    for &a in &gens {
        for &b in &gens {
            if a != b && (a.row == b.row || a.col == b.col) {
                orthogonal = orthogonal.max(dev(&(&m.get(a) * &m.get(b))));
            }
        }
    }
    let mut vanishing: f64 = 0.0;
    for (a, b) in rules.vanishing_pairs() {
        vanishing = vanishing.max(dev(&(&m.get(a) * &m.get(b))));
        vanishing = vanishing.max(dev(&(&m.get(b) * &m.get(a))));
    }
    let one = NCPolynomial::<C>::one();
    let mut sums: f64 = 0.0;
    for &s in p.slots() {
        for f in [Family::Row(s), Family::Col(s)] {
            let sum = NCPolynomial::<C>::sum_of(rules.family_members(f)) - one.clone();
            sums = sums.max(dev(&m.evaluate(&sum)));
        }
    }
    let mut linear: f64 = 0.0;
    for rel in p.linear_relations() {
        linear = linear.max(dev(&m.evaluate(rel)));
    }
    Ok(RelationViolationReport {
        tolerance: tol,
        classes: vec![
            ClassDeviation { class: "self-adjoint", deviation: self_adjoint },
            ClassDeviation { class: "idempotent", deviation: idempotent },
            ClassDeviation { class: "orthogonal", deviation: orthogonal },
            ClassDeviation { class: "vanishing", deviation: vanishing },
            ClassDeviation { class: "unit-sum", deviation: sums },
            ClassDeviation { class: "linear", deviation: linear },
        ],
    })
}

pub fn character_to_model<T: Real>(c: &Character) -> MatrixModel<T> {
    let n = c.slots().len();
    let mut entries = vec![Mat::zeros(1); n * n];
    for (col, &row) in c.image().iter().enumerate() {
        entries[row * n + col] = Mat::identity(1);
    }
    MatrixModel {
        dim: 1,
        slots: c.slots().to_vec(),
        entries,
    }
}

/// The 4×4 block magic unitary over 2×2 matrices with `p = diag(1,0)` and the
/// rank-one projection `q(θ)`.
pub fn pauli_magic<T: Real>(theta: T) -> Vec<Vec<Mat<T>>> {
    let (s, c) = theta.sin_cos();
    let (z, o) = (T::zero(), T::one());
    let p = Mat::from_real(2, &[o, z, z, z]);
    let q = Mat::from_real(2, &[c * c, c * s, c * s, s * s]);
    let id = Mat::identity(2);
    let np = &id - &p;
    let nq = &id - &q;
    let zero = Mat::zeros(2);
    vec![
        vec![p.clone(), np.clone(), zero.clone(), zero.clone()],
        vec![np, p, zero.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), q.clone(), nq.clone()],
        vec![zero.clone(), zero, nq, q],
    ]
}

/// `q^{ks}_{ir} = δ_{sr}·u^k_i` for the block magic unitary `u` of [`pauli_magic`].
pub fn pauli_witness<T: Real>(g: &Multigraph, theta: T) -> Result<MatrixModel<T>, ModelError> {
    let ug = g.underlying();
    let m = g.max_multiplicity();
    if g.vertex_count() != 4 || !ug.is_complete() || !g.is_uniform() || m < 2 {
        return Err(ModelError::UnsupportedUnderlyingGraph);
    }
    let u = pauli_magic(theta);
    let slots = g.all_slots();
    let mut entries = Vec::with_capacity(slots.len() * slots.len());
    for x in &slots {
        for y in &slots {
            entries.push(if x.label == y.label {
                u[x.v()][y.v()].clone()
            } else {
                Mat::zeros(2)
            });
        }
    }
    MatrixModel::new(2, slots, entries)
}

/// Bi-unitarity of `U` and its conjugate, and how far `U` is from a magic unitary.
pub fn evaluate_edge_matrix<T: Real, C: Coefficient>(m: &MatrixModel<T>, em: &EdgeMatrix<C>) -> EdgeDeviation {
    let n = em.size();
    let d = m.dim();
    let u: Vec<Vec<Mat<T>>> = (0..n)
        .map(|s| (0..n).map(|t| m.evaluate(em.entry(s, t))).collect())
        .collect();
    let ua: Vec<Vec<Mat<T>>> = u.iter().map(|r| r.iter().map(Mat::adjoint).collect()).collect();
    let id = Mat::identity(d);
    let zero = Mat::zeros(d);
    let delta = |a: usize, b: usize| if a == b { &id } else { &zero };
    let mut biunitary: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let mut s1 = Mat::zeros(d);
            let mut s2 = Mat::zeros(d);
            let mut s3 = Mat::zeros(d);
            let mut s4 = Mat::zeros(d);
            for k in 0..n {
                s1 = &s1 + &(&u[a][k] * &ua[b][k]);
                s2 = &s2 + &(&ua[k][a] * &u[k][b]);
                s3 = &s3 + &(&ua[a][k] * &u[b][k]);
                s4 = &s4 + &(&u[k][a] * &ua[k][b]);
            }
            for s in [s1, s2, s3, s4] {
                biunitary = biunitary.max(dev(&(&s - delta(a, b))));
            }
        }
    }
    let mut magic: f64 = 0.0;
    let mut worst_idempotent: f64 = 0.0;
    let mut worst_entry = (0, 0);
    for a in 0..n {
        let mut row = Mat::zeros(d);
        let mut col = Mat::zeros(d);
        for b in 0..n {
            let e = &u[a][b];
            let idem = dev(&(&(e * e) - e));
            if idem > worst_idempotent {
                worst_idempotent = idem;
                worst_entry = (a, b);
            }
            magic = magic.max(idem).max(dev(&(&ua[a][b] - e)));
            row = &row + e;
            col = &col + &u[b][a];
        }
        magic = magic.max(dev(&(&row - &id))).max(dev(&(&col - &id)));
    }
    EdgeDeviation {
        biunitary,
        magic,
        worst_idempotent,
        worst_entry,
    }
}

pub fn combine<T: Real>(models: &[MatrixModel<T>], mode: CombineMode) -> Result<MatrixModel<T>, ModelError> {
    let (first, rest) = models.split_first().ok_or(ModelError::IncompatibleModels)?;
    if rest.iter().any(|m| m.slots != first.slots) {
        return Err(ModelError::IncompatibleModels);
    }
    let n = first.slots.len();
    let mut acc = first.clone();
    for m in rest {
        acc = match mode {
            CombineMode::DirectSum => MatrixModel {
                dim: acc.dim + m.dim,
                slots: acc.slots.clone(),
                entries: acc.entries.iter().zip(&m.entries).map(|(a, b)| a.direct_sum(b)).collect(),
            },
            CombineMode::Tensor => {
                let dim = acc.dim * m.dim;
                let mut entries = Vec::with_capacity(n * n);
                for x in 0..n {
                    for y in 0..n {
                        let mut e = Mat::zeros(dim);
                        for z in 0..n {
                            let a = &acc.entries[x * n + z];
                            let b = &m.entries[z * n + y];
                            if a.is_zero() || b.is_zero() {
                                continue;
                            }
                            e = &e + &a.kron(b);
                        }
                        entries.push(e);
                    }
                }
                MatrixModel {
                    dim,
                    slots: acc.slots.clone(),
                    entries,
                }
            }
        };
    }
    Ok(acc)
}

/// A Householder unitary from a seeded random vector.
pub fn random_unitary<T: Real>(dim: usize, seed: u64) -> Mat<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex<T>> = (0..dim)
        .map(|_| {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            Complex::new(T::from_f64(re).unwrap(), T::from_f64(im).unwrap())
        })
        .collect();
    Mat::householder(&v)
}

/// Test models built from characters: three direct sums of three characters,
/// each conjugated by a seeded random unitary, and the coproduct product of the first two.
pub fn corpus_models<T: Real>(chars: &[Character], seed: u64) -> Vec<MatrixModel<T>> {
    let mut out = Vec::new();
    if chars.is_empty() {
        return out;
    }
    let pick = |k: usize| &chars[(k * 7919) % chars.len()];
    for k in 0..3usize {
        let parts = [character_to_model::<T>(pick(2 * k)), character_to_model(pick(2 * k + 1)), character_to_model(pick(5 * k + 3))];
        let sum = combine(&parts, CombineMode::DirectSum).expect("same index set");
        out.push(sum.conjugate(&random_unitary(3, seed + k as u64)));
    }
    let t = combine(&out[..2], CombineMode::Tensor).expect("same index set");
    out.push(t);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub dimension: usize,
    pub vertices: Vec<String>,
    pub slots: Vec<(String, u32)>,
    /// Row-major over generators; each matrix row-major with `[re, im]` pairs.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl MatrixModel<f64> {
    pub fn to_json_value(&self, names: &[String]) -> ModelJson {
        ModelJson {
            dimension: self.dim,
            vertices: names.to_vec(),
            slots: self.slots.iter().map(|s| (names[s.v()].clone(), s.label)).collect(),
            matrices: self
                .entries
                .iter()
                .map(|m| m.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
        }
    }

    pub fn from_json_value(j: &ModelJson) -> Result<Self, ModelError> {
        let slots = j
            .slots
            .iter()
            .map(|(v, l)| {
                j.vertices
                    .iter()
                    .position(|n| n == v)
                    .map(|i| Slot::new(i, *l))
                    .ok_or_else(|| ModelError::Malformed(format!("unknown vertex {v}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let entries = j
            .matrices
            .iter()
            .map(|rows| {
                if rows.len() != j.dimension || rows.iter().any(|r| r.len() != j.dimension) {
                    return Err(ModelError::DimensionMismatch("matrix shape".into()));
                }
                Ok(Mat::from_rows(
                    rows.iter()
                        .map(|r| r.iter().map(|z| Complex::new(z[0], z[1])).collect())
                        .collect(),
                ))
            })
            .collect::<Result<Vec<_>, _>>()?;
        MatrixModel::new(j.dimension, slots, entries)
    }
}
