use crate::catalog::DomainFamily;
use crate::error::{Error, Result};
use crate::symbol::{CompiledSymbol, SymbolPolynomial};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

/// Domains whose `S1` is handled explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryKind {
    Ball { d: u32 },
    TypeI { r: u32, s: u32 },
}

impl BoundaryKind {
    pub fn from_family(family: DomainFamily) -> Result<Self> {
        match family {
            DomainFamily::Ball { d } => Ok(BoundaryKind::Ball { d }),
            DomainFamily::TypeI { r, s } => Ok(BoundaryKind::TypeI { r, s }),
            other => Err(Error::UnsupportedFamily(format!("no explicit boundary geometry for {other}"))),
        }
    }

    /// Variables of ambient symbols (`d`, or `r s` row-major matrix entries).
    pub fn ambient_nvars(&self) -> usize {
        match *self {
            BoundaryKind::Ball { d } => d as usize,
            BoundaryKind::TypeI { r, s } => (r * s) as usize,
        }
    }

    /// Variables of boundary-coordinate symbols (`d`, or `r + s`).
    pub fn boundary_nvars(&self) -> usize {
        match *self {
            BoundaryKind::Ball { d } => d as usize,
            BoundaryKind::TypeI { r, s } => (r + s) as usize,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint {
    Ball { c: Vec<Complex64> },
    TypeI { xi1: Vec<Complex64>, xi2: Vec<Complex64> },
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `(u|v) = sum u_k conj(v_k)`.
pub(crate) fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

fn check_unit(v: &[Complex64]) -> Result<()> {
    if v.is_empty() || (norm(v) - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition("boundary coordinates must be unit vectors".into()));
    }
    Ok(())
}

impl BoundaryPoint {
    pub fn ball(c: Vec<Complex64>) -> Result<Self> {
        check_unit(&c)?;
        Ok(BoundaryPoint::Ball { c })
    }

    pub fn type_i(xi1: Vec<Complex64>, xi2: Vec<Complex64>) -> Result<Self> {
        check_unit(&xi1)?;
        check_unit(&xi2)?;
        if xi1.len() > xi2.len() {
            return Err(Error::Precondition("need r <= s".into()));
        }
        Ok(BoundaryPoint::TypeI { xi1, xi2 })
    }

    pub fn kind(&self) -> BoundaryKind {
        match self {
            BoundaryPoint::Ball { c } => BoundaryKind::Ball { d: c.len() as u32 },
            BoundaryPoint::TypeI { xi1, xi2 } => BoundaryKind::TypeI { r: xi1.len() as u32, s: xi2.len() as u32 },
        }
    }

    /// Boundary coordinates, the evaluation point of boundary symbols.
    pub fn coords(&self) -> Vec<Complex64> {
        match self {
            BoundaryPoint::Ball { c } => c.clone(),
            BoundaryPoint::TypeI { xi1, xi2 } => xi1.iter().chain(xi2).copied().collect(),
        }
    }

    /// The tripotent `c` itself (row-major for matrices).
    pub fn ambient(&self) -> Vec<Complex64> {
        match self {
            BoundaryPoint::Ball { c } => c.clone(),
            BoundaryPoint::TypeI { xi1, xi2 } => outer(xi1, xi2),
        }
    }
}

fn outer(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

/// Orthonormal basis of the complement of the unit vector `x`.
fn complement(x: &[Complex64]) -> Vec<Vec<Complex64>> {
    let d = x.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| x[a].norm().partial_cmp(&x[b].norm()).unwrap().then(a.cmp(&b)));
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(d.saturating_sub(1));
    for &k in order.iter().take(d.saturating_sub(1)) {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[k] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in std::iter::once(x).chain(out.iter().map(Vec::as_slice)) {
                let p = inner(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= p * bi;
                }
            }
        }
        let nv = norm(&v);
        out.push(v.into_iter().map(|z| z / nv).collect());
    }
    out
}

/// Orthonormal complex frame of the Peirce 1-space `Z1_c`.
#[derive(Clone, Debug)]
pub struct PeirceFrame {
    /// Frame vectors in ambient coordinates.
    pub directions: Vec<Vec<Complex64>>,
    /// The same directions as tangent vectors in boundary coordinates.
    pub lifts: Vec<Vec<Complex64>>,
    /// The `Z2_c` direction `c`.
    pub c: Vec<Complex64>,
    /// The Reeb direction `ic`.
    pub reeb: Vec<Complex64>,
}

impl PeirceFrame {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

pub fn peirce_frame(p: &BoundaryPoint) -> PeirceFrame {
    let c = p.ambient();
    let (directions, lifts) = match p {
        BoundaryPoint::Ball { c } => {
            let w = complement(c);
            (w.clone(), w)
        }
        BoundaryPoint::TypeI { xi1, xi2 } => {
            let (r, s) = (xi1.len(), xi2.len());
            let zero = Complex64::new(0.0, 0.0);
            let mut dirs = Vec::new();
            let mut lifts = Vec::new();
            for u in complement(xi1) {
                dirs.push(outer(&u, xi2));
                lifts.push(u.into_iter().chain(std::iter::repeat_n(zero, s)).collect());
            }
            for v in complement(xi2) {
                dirs.push(outer(xi1, &v));
                lifts.push(std::iter::repeat_n(zero, r).chain(v).collect());
            }
            (dirs, lifts)
        }
    };
    let reeb = c.iter().map(|z| z * Complex64::i()).collect();
    PeirceFrame { directions, lifts, c, reeb }
}

/// Real frame `{w, iw}` of `Z1_c` with the LU factors of
/// `Omega_kl = (d eta)_c(v_k, v_l) = 2 Im (v_k|v_l)`.
pub(crate) struct RealFrame {
    lifts: Vec<Vec<Complex64>>,
    omega: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl RealFrame {
    pub(crate) fn at(p: &BoundaryPoint) -> Result<Self> {
        let frame = peirce_frame(p);
        let i = Complex64::i();
        let mut dirs = Vec::new();
        let mut lifts = Vec::new();
        for (w, t) in frame.directions.iter().zip(&frame.lifts) {
            dirs.push(w.clone());
            lifts.push(t.clone());
            dirs.push(w.iter().map(|z| z * i).collect::<Vec<_>>());
            lifts.push(t.iter().map(|z| z * i).collect());
        }
        let m = dirs.len();
        let omega = DMatrix::from_fn(m, m, |k, l| 2.0 * inner(&dirs[k], &dirs[l]).im);
        let lu = omega.lu();
        if m > 0 && !lu.is_invertible() {
            return Err(Error::SingularForm);
        }
        Ok(RealFrame { lifts, omega: lu })
    }
}

/// Boundary Poisson bracket `{phi, psi}` with precompiled derivatives.
#[derive(Clone, Debug)]
pub struct BracketKernel {
    kind: BoundaryKind,
    phi: Vec<(CompiledSymbol, CompiledSymbol)>,
    psi: Vec<(CompiledSymbol, CompiledSymbol)>,
}

fn gradient(f: &SymbolPolynomial) -> Vec<(CompiledSymbol, CompiledSymbol)> {
    (0..f.nvars()).map(|k| (f.d_z(k).compile(), f.d_zbar(k).compile())).collect()
}

fn directional(grad: &[(CompiledSymbol, CompiledSymbol)], x: &[Complex64], lifts: &[Vec<Complex64>]) -> Vec<Complex64> {
    let partials: Vec<(Complex64, Complex64)> = grad.iter().map(|(dz, dzb)| (dz.eval(x), dzb.eval(x))).collect();
    lifts
        .iter()
        .map(|t| partials.iter().zip(t).map(|((a, b), tk)| a * tk + b * tk.conj()).sum())
        .collect()
}

impl BracketKernel {
    /// `phi` and `psi` in boundary coordinates of `kind`.
    pub fn new(phi: &SymbolPolynomial, psi: &SymbolPolynomial, kind: BoundaryKind) -> Result<Self> {
        let n = kind.boundary_nvars();
        if phi.nvars() != n || psi.nvars() != n {
            return Err(Error::SymbolDomain(format!("bracket symbols need {n} boundary variables")));
        }
        Ok(BracketKernel { kind, phi: gradient(phi), psi: gradient(psi) })
    }

    pub fn eval(&self, p: &BoundaryPoint) -> Result<Complex64> {
        if p.kind() != self.kind {
            return Err(Error::SymbolDomain("point and kernel live on different boundaries".into()));
        }
        Ok(self.eval_in(&RealFrame::at(p)?, &p.coords()))
    }

    /// `zeta(phi)^T g(psi)` where `Omega zeta(phi) = g(phi)`.
    pub(crate) fn eval_in(&self, frame: &RealFrame, x: &[Complex64]) -> Complex64 {
        let g_phi = directional(&self.phi, x, &frame.lifts);
        let g_psi = directional(&self.psi, x, &frame.lifts);
        let re = DVector::from_iterator(g_phi.len(), g_phi.iter().map(|z| z.re));
        let im = DVector::from_iterator(g_phi.len(), g_phi.iter().map(|z| z.im));
        let zr = frame.omega.solve(&re).expect("invertible form");
        let zi = frame.omega.solve(&im).expect("invertible form");
        zr.iter().zip(zi.iter()).zip(&g_psi).map(|((a, b), g)| Complex64::new(*a, *b) * g).sum()
    }
}

pub fn boundary_bracket(phi: &SymbolPolynomial, psi: &SymbolPolynomial, c: &BoundaryPoint) -> Result<Complex64> {
    BracketKernel::new(phi, psi, c.kind())?.eval(c)
}
