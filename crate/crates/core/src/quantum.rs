//! Dense, exact linear algebra on n-qubit states.
//!
//! Conventions used across the crate:
//!
//! - Qubit positions are 1-based. Qubit 1 is the leftmost ket factor and the
//!   most significant bit of an amplitude index, so for four qubits the ket
//!   |1001⟩ sits at index 9.
//! - States are normalized on construction; all comparisons go through
//!   explicit tolerances, never exact float equality.
//! - Everything is immutable after construction, and all operations are pure
//!   functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense simulation cap. Everything in this toolkit needs at most 7 qubits;
/// the cap leaves headroom without letting a typo allocate gigabytes.
pub const MAX_QUBITS: usize = 12;

/// State-level tolerance for norms and orthogonality checks.
pub const STATE_TOL: f64 = 1e-10;

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

fn check_position(position: usize, num_qubits: usize) -> Result<()> {
    if position == 0 || position > num_qubits {
        return Err(Error::PositionOutOfRange {
            position,
            num_qubits,
        });
    }
    Ok(())
}

/// Parse a bitstring like "1001" into an amplitude index (qubit 1 = MSB).
pub fn parse_bitstring(s: &str, num_qubits: usize) -> Result<usize> {
    if s.len() != num_qubits {
        return Err(Error::BadBitstring {
            string: s.to_string(),
            reason: format!("expected {num_qubits} bits, got {}", s.len()),
        });
    }
    let mut index = 0usize;
    for c in s.chars() {
        index <<= 1;
        match c {
            '0' => {}
            '1' => index |= 1,
            _ => {
                return Err(Error::BadBitstring {
                    string: s.to_string(),
                    reason: format!("invalid character {c:?}"),
                })
            }
        }
    }
    Ok(index)
}

/// Render an amplitude index as a bitstring (qubit 1 = MSB).
pub fn index_to_bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|b| {
            if index >> (num_qubits - 1 - b) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// ⟨bra|ket⟩ on raw amplitude slices.
pub fn inner(bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
    debug_assert_eq!(bra.len(), ket.len());
    bra.iter().zip(ket).map(|(a, b)| a.conj() * b).sum()
}

fn norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// A normalized pure state of `num_qubits` qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Build the normalized superposition of the given (bitstring, coefficient)
    /// terms. Duplicate bitstrings are summed; the result is normalized, so
    /// callers may pass unnormalized ket lists directly.
    pub fn from_terms<S: AsRef<str>>(num_qubits: usize, terms: &[(S, Complex64)]) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        for (bits, coeff) in terms {
            let index = parse_bitstring(bits.as_ref(), num_qubits)?;
            amplitudes[index] += coeff;
        }
        Self::from_amplitudes(num_qubits, amplitudes)
    }

    /// Normalize a raw amplitude vector into a state.
    pub fn from_amplitudes(num_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {num_qubits} qubits",
                amplitudes.len()
            )));
        }
        let n = norm(&amplitudes);
        if n < 1e-12 {
            return Err(Error::NullState);
        }
        for a in &mut amplitudes {
            *a /= n;
        }
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// The computational basis state at `index`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amplitudes = vec![Complex64::ZERO; 1 << num_qubits];
        amplitudes[index] = Complex64::ONE;
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of a basis ket given as a bitstring.
    pub fn amplitude(&self, bits: &str) -> Result<Complex64> {
        Ok(self.amplitudes[parse_bitstring(bits, self.num_qubits)?])
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Apply the n-fold tensor Hadamard H^{⊗n}. Involutive.
    pub fn hadamard_all(&self) -> StateVector {
        let mut amps = self.amplitudes.clone();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for bit in 0..self.num_qubits {
            let stride = 1usize << bit;
            let mut base = 0;
            while base < amps.len() {
                for low in base..base + stride {
                    let a = amps[low];
                    let b = amps[low + stride];
                    amps[low] = (a + b) * inv_sqrt2;
                    amps[low + stride] = (a - b) * inv_sqrt2;
                }
                base += 2 * stride;
            }
        }
        StateVector {
            num_qubits: self.num_qubits,
            amplitudes: amps,
        }
    }

    /// Probability of measuring even / odd overall parity.
    pub fn parity_probabilities(&self) -> (f64, f64) {
        let mut odd = 0.0;
        for (index, a) in self.amplitudes.iter().enumerate() {
            if index.count_ones() % 2 == 1 {
                odd += a.norm_sqr();
            }
        }
        let odd = odd.min(1.0);
        (1.0 - odd, odd)
    }

    /// Tensor product self ⊗ other (self occupies the leading positions).
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_qubit_count(n)?;
        let mut amps = vec![Complex64::ZERO; 1 << n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            for (j, b) in other.amplitudes.iter().enumerate() {
                amps[i << other.num_qubits | j] = a * b;
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amplitudes: amps,
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Partial trace over the complement of `keep`, straight from the pure state.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let plan = TracePlan::new(self.num_qubits, keep)?;
        let dim = 1 << plan.kept.len();
        let mut rho = DensityMatrix::zero_raw(plan.kept.len());
        for a in 0..dim {
            for b in 0..dim {
                let mut sum = Complex64::ZERO;
                for e in &plan.env_indices {
                    sum += self.amplitudes[plan.kept_indices[a] | e]
                        * self.amplitudes[plan.kept_indices[b] | e].conj();
                }
                rho.entries[a * dim + b] = sum;
            }
        }
        Ok(rho)
    }
}

/// Index scatter tables for a partial trace.
struct TracePlan {
    kept: Vec<usize>,
    kept_indices: Vec<usize>,
    env_indices: Vec<usize>,
}

impl TracePlan {
    fn new(num_qubits: usize, keep: &[usize]) -> Result<TracePlan> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        for &p in &kept {
            check_position(p, num_qubits)?;
        }
        let traced: Vec<usize> = (1..=num_qubits).filter(|p| !kept.contains(p)).collect();
        Ok(TracePlan {
            kept_indices: scatter_table(num_qubits, &kept),
            env_indices: scatter_table(num_qubits, &traced),
            kept,
        })
    }
}

/// For each value of a compact sub-index over `positions`, the full-state
/// index with those bits placed and all other bits zero.
fn scatter_table(num_qubits: usize, positions: &[usize]) -> Vec<usize> {
    let r = positions.len();
    (0..1usize << r)
        .map(|sub| {
            let mut full = 0usize;
            for (b, &p) in positions.iter().enumerate() {
                if sub >> (r - 1 - b) & 1 == 1 {
                    full |= 1 << (num_qubits - p);
                }
            }
            full
        })
        .collect()
}

/// A mixed state: a 2^n × 2^n complex matrix, row-major.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    fn zero_raw(num_qubits: usize) -> DensityMatrix {
        let dim = 1usize << num_qubits;
        DensityMatrix {
            num_qubits,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// The all-zero matrix, used as an accumulator for channel branches.
    pub fn zero(num_qubits: usize) -> Result<DensityMatrix> {
        check_qubit_count(num_qubits)?;
        Ok(Self::zero_raw(num_qubits))
    }

    /// |ψ⟩⟨ψ|.
    pub fn from_pure(state: &StateVector) -> DensityMatrix {
        let dim = state.dim();
        let mut rho = Self::zero_raw(state.num_qubits);
        for i in 0..dim {
            for j in 0..dim {
                rho.entries[i * dim + j] = state.amplitudes[i] * state.amplitudes[j].conj();
            }
        }
        rho
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.entries[i * dim + i]).sum()
    }

    /// tr(ρ²); equals 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    /// max |ρ_ij − conj(ρ_ji)|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.entries[i * dim + j] - self.entries[j * dim + i].conj()).norm());
            }
        }
        worst
    }

    /// True when ρ + slack·I admits a Cholesky factorization, i.e. every
    /// eigenvalue is at least −slack.
    pub fn is_positive_semidefinite(&self, slack: f64) -> bool {
        let dim = self.dim();
        let mut m = self.entries.clone();
        for i in 0..dim {
            m[i * dim + i] += 2.0 * slack;
        }
        // In-place complex Cholesky; fails iff a pivot goes negative.
        for j in 0..dim {
            let mut d = m[j * dim + j].re;
            for k in 0..j {
                d -= m[j * dim + k].norm_sqr();
            }
            if d < -slack * 1e-3 {
                return false;
            }
            let d = d.max(0.0).sqrt();
            for i in j + 1..dim {
                let mut v = m[i * dim + j];
                for k in 0..j {
                    v -= m[i * dim + k] * m[j * dim + k].conj();
                }
                m[i * dim + j] = if d > 0.0 { v / d } else { Complex64::ZERO };
            }
            m[j * dim + j] = Complex64::new(d, 0.0);
        }
        true
    }

    /// Check the density-matrix invariants: Hermitian to 1e-10, unit trace to
    /// 1e-10, and positive semidefinite with eigenvalue floor −1e-9.
    pub fn validate(&self) -> Result<()> {
        let h = self.hermiticity_deviation();
        if h > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "density matrix is not Hermitian (deviation {h:.3e})"
            )));
        }
        let t = self.trace();
        if (t.re - 1.0).abs() > 1e-10 || t.im.abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace is {t} rather than 1"
            )));
        }
        if !self.is_positive_semidefinite(1e-9) {
            return Err(Error::InvalidArgument(
                "density matrix has an eigenvalue below -1e-9".into(),
            ));
        }
        Ok(())
    }

    /// ρ += other (channel branch accumulation).
    pub fn add_assign(&mut self, other: &DensityMatrix) {
        assert_eq!(self.num_qubits, other.num_qubits);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    /// ρ += weight · |ket⟩⟨ket| for a raw (possibly unnormalized) vector.
    pub fn add_outer(&mut self, ket: &[Complex64], weight: f64) {
        let dim = self.dim();
        assert_eq!(ket.len(), dim);
        for i in 0..dim {
            if ket[i] == Complex64::ZERO {
                continue;
            }
            for j in 0..dim {
                self.entries[i * dim + j] += weight * ket[i] * ket[j].conj();
            }
        }
    }

    /// (M ⊗ I) ρ (M ⊗ I)† for a single-qubit operator M at the given position.
    pub fn apply_local(&self, op: &LocalOperator) -> Result<DensityMatrix> {
        check_position(op.position, self.num_qubits)?;
        let dim = self.dim();
        let bit = 1usize << (self.num_qubits - op.position);
        let m = &op.matrix;
        let mut out = self.entries.clone();
        // rows: out = (M ⊗ I) ρ
        for i0 in 0..dim {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            for j in 0..dim {
                let a = out[i0 * dim + j];
                let b = out[i1 * dim + j];
                out[i0 * dim + j] = m[0][0] * a + m[0][1] * b;
                out[i1 * dim + j] = m[1][0] * a + m[1][1] * b;
            }
        }
        // columns: out = out (M ⊗ I)†
        for j0 in 0..dim {
            if j0 & bit != 0 {
                continue;
            }
            let j1 = j0 | bit;
            for i in 0..dim {
                let a = out[i * dim + j0];
                let b = out[i * dim + j1];
                out[i * dim + j0] = a * m[0][0].conj() + b * m[0][1].conj();
                out[i * dim + j1] = a * m[1][0].conj() + b * m[1][1].conj();
            }
        }
        Ok(DensityMatrix {
            num_qubits: self.num_qubits,
            entries: out,
        })
    }

    /// ⟨ψ|ρ|ψ⟩ as a complex number (imaginary part ≈ 0 for Hermitian ρ).
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        if psi.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "state on {} qubits against density matrix on {}",
                psi.num_qubits, self.num_qubits
            )));
        }
        let dim = self.dim();
        let mut acc = Complex64::ZERO;
        for i in 0..dim {
            let mut row = Complex64::ZERO;
            for j in 0..dim {
                row += self.entries[i * dim + j] * psi.amplitudes[j];
            }
            acc += psi.amplitudes[i].conj() * row;
        }
        Ok(acc)
    }

    /// Partial trace over the complement of `keep`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let plan = TracePlan::new(self.num_qubits, keep)?;
        let dim_red = 1 << plan.kept.len();
        let dim = self.dim();
        let mut rho = DensityMatrix::zero_raw(plan.kept.len());
        for a in 0..dim_red {
            for b in 0..dim_red {
                let mut sum = Complex64::ZERO;
                for e in &plan.env_indices {
                    sum += self.entries[(plan.kept_indices[a] | e) * dim + (plan.kept_indices[b] | e)];
                }
                rho.entries[a * dim_red + b] = sum;
            }
        }
        Ok(rho)
    }
}

/// ⟨ψ|ρ|ψ⟩ as a real success metric.
pub fn fidelity(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    Ok(rho.expectation(psi)?.re)
}

/// A single-qubit operator embedded at a 1-based position.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    position: usize,
    matrix: [[Complex64; 2]; 2],
}

impl LocalOperator {
    pub fn new(position: usize, matrix: [[Complex64; 2]; 2]) -> Result<LocalOperator> {
        if position == 0 {
            return Err(Error::PositionOutOfRange {
                position,
                num_qubits: 0,
            });
        }
        if matrix.iter().flatten().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "local operator has non-finite entries".into(),
            ));
        }
        Ok(LocalOperator { position, matrix })
    }

    /// |i⟩⟨j| at the given position.
    pub fn ket_bra(position: usize, i: u8, j: u8) -> LocalOperator {
        let mut matrix = [[Complex64::ZERO; 2]; 2];
        matrix[i as usize][j as usize] = Complex64::ONE;
        LocalOperator { position, matrix }
    }

    pub fn pauli(position: usize, p: Pauli) -> LocalOperator {
        LocalOperator {
            position,
            matrix: p.matrix(),
        }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }

    pub fn dagger(&self) -> LocalOperator {
        let m = &self.matrix;
        LocalOperator {
            position: self.position,
            matrix: [
                [m[0][0].conj(), m[1][0].conj()],
                [m[0][1].conj(), m[1][1].conj()],
            ],
        }
    }

    pub(crate) fn apply_in_place(&self, amps: &mut [Complex64], num_qubits: usize) {
        let bit = 1usize << (num_qubits - self.position);
        let m = &self.matrix;
        for i0 in 0..amps.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let a = amps[i0];
            let b = amps[i1];
            amps[i0] = m[0][0] * a + m[0][1] * b;
            amps[i1] = m[1][0] * a + m[1][1] * b;
        }
    }

    /// Act on a state, returning raw (possibly unnormalized) amplitudes:
    /// non-unitary operators such as |i⟩⟨j| shrink the vector.
    pub fn apply_to(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        check_position(self.position, state.num_qubits)?;
        let mut amps = state.amplitudes.clone();
        self.apply_in_place(&mut amps, state.num_qubits);
        Ok(amps)
    }

    /// Act on a state known to stay normalized (unitary operators).
    pub fn apply_unitary(&self, state: &StateVector) -> Result<StateVector> {
        let amps = self.apply_to(state)?;
        StateVector::from_amplitudes(state.num_qubits, amps)
    }

    /// Materialize the full 2^n × 2^n operator acting as this on its qubit
    /// and as identity elsewhere.
    pub fn embed(&self, num_qubits: usize) -> Result<DenseOperator> {
        check_qubit_count(num_qubits)?;
        check_position(self.position, num_qubits)?;
        let dim = 1usize << num_qubits;
        let bit = 1usize << (num_qubits - self.position);
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for col in 0..dim {
            let cbit = (col & bit != 0) as usize;
            for rbit in 0..2 {
                let row = if rbit == 1 { col | bit } else { col & !bit };
                entries[row * dim + col] += self.matrix[rbit][cbit];
            }
        }
        Ok(DenseOperator { dim, entries })
    }
}

/// A materialized 2^n × 2^n operator.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> DenseOperator {
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::ONE;
        }
        DenseOperator { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entries[i * self.dim + j] * v[j])
                    .sum()
            })
            .collect()
    }

    pub fn matmul(&self, other: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entries[i * dim + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..dim {
                    entries[i * dim + j] += a * other.entries[k * dim + j];
                }
            }
        }
        DenseOperator { dim, entries }
    }
}

/// The single-qubit Pauli alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::ZERO;
        let l = Complex64::ONE;
        let i = Complex64::I;
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of Pauli letters, one per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> PauliString {
        PauliString { letters }
    }

    pub fn identity(num_qubits: usize) -> PauliString {
        PauliString {
            letters: vec![Pauli::I; num_qubits],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Positions (1-based) carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Apply the (unitary) Pauli string to a state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.letters.len() != state.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "Pauli string on {} qubits against state on {}",
                self.letters.len(),
                state.num_qubits()
            )));
        }
        let mut amps = state.amplitudes.clone();
        for (i, p) in self.letters.iter().enumerate() {
            if *p == Pauli::I {
                continue;
            }
            LocalOperator::pauli(i + 1, *p).apply_in_place(&mut amps, state.num_qubits());
        }
        StateVector::from_amplitudes(state.num_qubits(), amps)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bit_ordering_puts_qubit_one_at_the_msb() {
        assert_eq!(parse_bitstring("1001", 4).unwrap(), 9);
        assert_eq!(index_to_bitstring(9, 4), "1001");
        let s = StateVector::from_terms(4, &[("1001", c(1.0))]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[9].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn from_terms_normalizes_and_sums_duplicates() {
        let s = StateVector::from_terms(4, &[("0000", c(1.0)), ("1111", c(1.0))]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitude("0000").unwrap().re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitude("1111").unwrap().re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);

        let single = StateVector::from_terms(1, &[("0", c(1.0))]).unwrap();
        assert_eq!(single.amplitudes()[0], Complex64::ONE);

        let dup = StateVector::from_terms(2, &[("10", c(0.5)), ("10", c(0.5))]).unwrap();
        assert_abs_diff_eq!(dup.amplitude("10").unwrap().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cancelling_terms_is_a_null_state() {
        let err = StateVector::from_terms(2, &[("00", c(1.0)), ("00", c(-1.0))]).unwrap_err();
        assert!(matches!(err, Error::NullState));
    }

    #[test]
    fn qubit_cap_is_enforced() {
        let err = StateVector::basis(MAX_QUBITS + 1, 0).unwrap_err();
        assert!(matches!(err, Error::TooManyQubits { .. }));
    }

    #[test]
    fn local_operator_basis_actions() {
        // |0⟩⟨1| at qubit 2 sends |01⟩ to |00⟩.
        let s = StateVector::from_terms(2, &[("01", c(1.0))]).unwrap();
        let out = LocalOperator::ket_bra(2, 0, 1).apply_to(&s).unwrap();
        assert_abs_diff_eq!(out[0].re, 1.0, epsilon = 1e-12);
        assert!(out[1..].iter().all(|a| a.norm() < 1e-12));

        // σ_x at qubit 1 sends |0000⟩ to |1000⟩.
        let s = StateVector::basis(4, 0).unwrap();
        let out = LocalOperator::pauli(1, Pauli::X).apply_to(&s).unwrap();
        assert_abs_diff_eq!(out[0b1000].re, 1.0, epsilon = 1e-12);

        // |1⟩⟨1| at qubit 3 keeps only the |1111⟩ branch of |0000⟩+|1111⟩.
        let code0 = StateVector::from_terms(4, &[("0000", c(1.0)), ("1111", c(1.0))]).unwrap();
        let out = LocalOperator::ket_bra(3, 1, 1).apply_to(&code0).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(out[0b1111].re, r, epsilon = 1e-12);
        assert!(norm(&out) < r + 1e-12);
    }

    #[test]
    fn embed_matches_lazy_application() {
        let op = LocalOperator::pauli(2, Pauli::Y);
        let dense = op.embed(3).unwrap();
        for index in 0..8 {
            let s = StateVector::basis(3, index).unwrap();
            let lazy = op.apply_to(&s).unwrap();
            let full = dense.mul_vec(s.amplitudes());
            for (a, b) in lazy.iter().zip(&full) {
                assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn embed_rejects_out_of_range_position() {
        let op = LocalOperator::pauli(5, Pauli::X);
        assert!(op.embed(4).is_err());
        let s = StateVector::basis(4, 0).unwrap();
        assert!(op.apply_to(&s).is_err());
    }

    #[test]
    fn hadamard_is_involutive() {
        let mut rng = crate::stream_rng(11, 0);
        for _ in 0..100 {
            let s = crate::analysis::haar_random_state(3, &mut rng);
            let back = s.hadamard_all().hadamard_all();
            assert!((s.inner(&back).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_probabilities_examples() {
        let code0 = StateVector::from_terms(4, &[("0000", c(1.0)), ("1111", c(1.0))]).unwrap();
        assert_eq!(code0.parity_probabilities(), (1.0, 0.0));

        let flipped = LocalOperator::pauli(2, Pauli::X).apply_unitary(&code0).unwrap();
        let (even, odd) = flipped.parity_probabilities();
        assert_abs_diff_eq!(even, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(odd, 1.0, epsilon = 1e-12);

        let plus = StateVector::from_terms(1, &[("0", c(1.0)), ("1", c(1.0))]).unwrap();
        let (even, odd) = plus.parity_probabilities();
        assert_abs_diff_eq!(even, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(odd, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn reduced_density_examples() {
        // |0⟩ ⊗ |+⟩, keep qubit 1.
        let zero = StateVector::basis(1, 0).unwrap();
        let plus = StateVector::from_terms(1, &[("0", c(1.0)), ("1", c(1.0))]).unwrap();
        let rho = zero.tensor(&plus).unwrap().reduced_density(&[1]).unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(1, 1).re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);

        // Bell state, keep qubit 1: maximally mixed.
        let bell = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(1.0))]).unwrap();
        let rho = bell.reduced_density(&[1]).unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(1, 1).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(0, 1).norm(), 0.0, epsilon = 1e-12);

        // |0000⟩+|1111⟩, keep {2,3,4}: (|000⟩⟨000| + |111⟩⟨111|)/2.
        let code0 = StateVector::from_terms(4, &[("0000", c(1.0)), ("1111", c(1.0))]).unwrap();
        let rho = code0.reduced_density(&[2, 3, 4]).unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(7, 7).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.entry(0, 7).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
        rho.validate().unwrap();
    }

    #[test]
    fn reduced_density_rejects_empty_subset() {
        let bell = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(1.0))]).unwrap();
        assert!(matches!(bell.reduced_density(&[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let plus = StateVector::from_terms(1, &[("0", c(1.0)), ("1", c(1.0))]).unwrap();

        assert_abs_diff_eq!(fidelity(&zero.to_density(), &zero).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&zero.to_density(), &one).unwrap(), 0.0, epsilon = 1e-12);

        let mut mixed = DensityMatrix::zero(1).unwrap();
        mixed.add_outer(zero.amplitudes(), 0.5);
        mixed.add_outer(one.amplitudes(), 0.5);
        assert_abs_diff_eq!(fidelity(&mixed, &plus).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_rejects_dimension_mismatch() {
        let zero = StateVector::basis(1, 0).unwrap();
        let bell = StateVector::from_terms(2, &[("00", c(1.0)), ("11", c(1.0))]).unwrap();
        assert!(fidelity(&bell.to_density(), &zero).is_err());
    }

    #[test]
    fn pauli_string_round_trip() {
        let p = PauliString::new(vec![Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]);
        assert_eq!(p.to_string(), "IXYZ");
        assert_eq!(p.support(), vec![2, 3, 4]);
        let s = StateVector::basis(4, 0).unwrap();
        let out = p.apply(&s).unwrap();
        // X₂Y₃Z₄ |0000⟩ = i |0110⟩
        assert_abs_diff_eq!(out.amplitudes()[0b0110].im, 1.0, epsilon = 1e-12);
    }
}
