//! Vertex couplings in ST form and their on-shell scattering matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::FloquetError;

pub type CMatrix = DMatrix<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;

/// Coupling `(I_r T; 0 0) psi' = (S 0; -T* I_{n-r}) psi` at a vertex of
/// degree `n`, with outward derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexCouplingST {
    n: usize,
    r: usize,
    t: CMatrix,
    s: CMatrix,
}

impl VertexCouplingST {
    pub fn new(n: usize, r: usize, t: CMatrix, s: CMatrix) -> Result<Self, FloquetError> {
        if n == 0 || r > n {
            return Err(FloquetError::InvalidCoupling(format!("need 0 <= r <= n and n >= 1, got n = {n}, r = {r}")));
        }
        if t.shape() != (r, n - r) {
            return Err(FloquetError::InvalidCoupling(format!("T must be {r}x{}, got {:?}", n - r, t.shape())));
        }
        if s.shape() != (r, r) {
            return Err(FloquetError::InvalidCoupling(format!("S must be {r}x{r}, got {:?}", s.shape())));
        }
        if (&s - s.adjoint()).norm() > HERMITIAN_TOL * (1.0 + s.norm()) {
            return Err(FloquetError::InvalidCoupling("S must be Hermitian".into()));
        }
        Ok(VertexCouplingST { n, r, t, s })
    }

    /// Delta coupling of strength `alpha`: continuity plus `sum psi' = alpha psi`.
    pub fn delta(n: usize, alpha: f64) -> Self {
        let t = CMatrix::from_element(1, n - 1, Complex64::new(1.0, 0.0));
        let s = CMatrix::from_element(1, 1, Complex64::new(alpha, 0.0));
        VertexCouplingST::new(n, 1, t, s).expect("valid delta coupling")
    }

    pub fn kirchhoff(n: usize) -> Self {
        Self::delta(n, 0.0)
    }

    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn rank(&self) -> usize {
        self.r
    }
    pub fn t(&self) -> &CMatrix {
        &self.t
    }
    pub fn s(&self) -> &CMatrix {
        &self.s
    }

    pub fn is_scale_invariant(&self) -> bool {
        self.s.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    /// The same coupling with `S` removed.
    pub fn associated_scale_invariant(&self) -> Self {
        VertexCouplingST { s: CMatrix::zeros(self.r, self.r), ..self.clone() }
    }

    /// `(I_r ; T*)`, n x r.
    fn column_block(&self) -> CMatrix {
        let mut c = CMatrix::zeros(self.n, self.r);
        c.view_mut((0, 0), (self.r, self.r)).fill_with_identity();
        c.view_mut((self.r, 0), (self.n - self.r, self.r)).copy_from(&self.t.adjoint());
        c
    }

    /// `(I_r  T)`, r x n.
    fn row_block(&self) -> CMatrix {
        self.column_block().adjoint()
    }

    fn gram(&self) -> CMatrix {
        CMatrix::identity(self.r, self.r) + &self.t * self.t.adjoint()
    }

    fn inverse(m: CMatrix) -> Result<CMatrix, FloquetError> {
        m.try_inverse().ok_or(FloquetError::SingularResolvent)
    }

    /// Scattering matrix as a function of `s = 1/k`; `s = 0` is the
    /// high-energy limit.
    pub fn scattering_at_inverse_k(&self, s: f64) -> Result<CMatrix, FloquetError> {
        let inner = self.gram() + self.s.map(|z| z * Complex64::new(0.0, s));
        let mid = Self::inverse(inner)?;
        let two = Complex64::new(2.0, 0.0);
        Ok(self.column_block() * mid * self.row_block() * two - CMatrix::identity(self.n, self.n))
    }

    /// On-shell scattering matrix at momentum `k > 0`.
    pub fn st_scattering(&self, k: f64) -> Result<CMatrix, FloquetError> {
        if k.is_nan() || k <= 0.0 {
            return Err(FloquetError::InvalidMomentum(k));
        }
        self.scattering_at_inverse_k(1.0 / k)
    }

    /// `(S0, S1(k))` with `S(k) = S0 + S1(k)/k`.
    pub fn scattering_split(&self, k: f64) -> Result<(CMatrix, CMatrix), FloquetError> {
        if k.is_nan() || k <= 0.0 {
            return Err(FloquetError::InvalidMomentum(k));
        }
        let g_inv = Self::inverse(self.gram())?;
        let two = Complex64::new(2.0, 0.0);
        let s0 = self.column_block() * &g_inv * self.row_block() * two - CMatrix::identity(self.n, self.n);
        let inner = Self::inverse(self.gram() + self.s.map(|z| z * Complex64::new(0.0, 1.0 / k)))?;
        let s1 = self.column_block() * &g_inv * &self.s * inner * self.row_block() * Complex64::new(0.0, -2.0);
        Ok((s0, s1))
    }

    /// `lim_{k -> inf} S1(k)`.
    pub fn s1_limit(&self) -> Result<CMatrix, FloquetError> {
        let g_inv = Self::inverse(self.gram())?;
        Ok(self.column_block() * &g_inv * &self.s * &g_inv * self.row_block() * Complex64::new(0.0, -2.0))
    }
}
