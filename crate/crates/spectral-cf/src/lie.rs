//! Generator sets, bracket relations and catalogued observables of the small matrix Lie algebras.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::fock::{make_fock, LineRealization};
use crate::linalg::{max_abs, real, CMatrix, HermitianOperator, StateVector, C64, I};
use crate::measure::Atom;

/// Tolerance for brackets of exact (integer or surd) matrices.
pub const RELATION_TOL: f64 = 1e-12;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// A declared bracket `[lhs.0, lhs.1] = Σ c_k G_k`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub lhs: (String, String),
    pub rhs: Vec<(C64, String)>,
}

impl Relation {
    fn new(a: &str, b: &str, rhs: &[(C64, &str)]) -> Self {
        Self {
            lhs: (a.into(), b.into()),
            rhs: rhs.iter().map(|(c, g)| (*c, g.to_string())).collect(),
        }
    }

    pub fn describe(&self) -> String {
        let rhs = if self.rhs.is_empty() {
            "0".to_string()
        } else {
            self.rhs
                .iter()
                .map(|(c, g)| format!("({c}){g}"))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("[{}, {}] = {}", self.lhs.0, self.lhs.1, rhs)
    }
}

/// Outcome of checking one relation.
#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// Named generators together with their declared commutation relations.
///
/// For truncated boson realizations the relations only hold on the leading
/// `interior x interior` block, which is where they are checked.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub name: String,
    pub generators: Vec<(String, CMatrix)>,
    pub relations: Vec<Relation>,
    pub interior: Option<usize>,
    pub tolerance: f64,
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

impl GeneratorSet {
    pub fn generator(&self, name: &str) -> Option<&CMatrix> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    fn get(&self, name: &str) -> Result<&CMatrix> {
        self.generator(name)
            .ok_or_else(|| Error::Unknown(format!("generator {name} of {}", self.name)))
    }

    pub fn check_relations(&self) -> Result<Vec<RelationCheck>> {
        let mut out = Vec::with_capacity(self.relations.len());
        for rel in &self.relations {
            let lhs = commutator(self.get(&rel.lhs.0)?, self.get(&rel.lhs.1)?);
            let mut diff = lhs;
            for (coef, g) in &rel.rhs {
                diff -= self.get(g)? * *coef;
            }
            let residual = match self.interior {
                Some(k) => max_abs(&diff.view((0, 0), (k, k)).into_owned()),
                None => max_abs(&diff),
            };
            out.push(RelationCheck {
                relation: rel.describe(),
                residual,
                tolerance: self.tolerance,
            });
        }
        Ok(out)
    }

    /// Fails with the list of violated brackets, if any.
    pub fn verify(&self) -> Result<()> {
        let bad: Vec<String> = self
            .check_relations()?
            .into_iter()
            .filter(|c| !c.holds())
            .map(|c| format!("{} (residual {:e})", c.relation, c.residual))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Numerical(format!("{}: violated relations: {}", self.name, bad.join("; "))))
        }
    }
}

fn m2(a: [C64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &a)
}

fn m3r(a: [f64; 9]) -> CMatrix {
    CMatrix::from_iterator(3, 3, a.iter().map(|&x| real(x))).transpose()
}

const Z: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn sigma(j: usize) -> CMatrix {
    match j {
        1 => m2([Z, ONE, ONE, Z]),
        2 => m2([Z, -I, I, Z]),
        _ => m2([ONE, Z, Z, -ONE]),
    }
}

/// Catalogued generator-set names.
pub const GENERATOR_SETS: &[&str] = &["sl2R", "su2-pauli", "su11-pauli", "so3", "h3R", "su11-boson(N)"];

pub fn build_generators(name: &str) -> Result<GeneratorSet> {
    let r = |x: f64| real(x);
    let set = match name {
        "sl2R" => GeneratorSet {
            name: name.into(),
            generators: vec![
                ("Delta".into(), m2([Z, Z, -ONE, Z])),
                ("R".into(), m2([Z, ONE, Z, Z])),
                ("rho".into(), m2([ONE, Z, Z, -ONE])),
            ],
            relations: vec![
                Relation::new("Delta", "R", &[(ONE, "rho")]),
                Relation::new("rho", "R", &[(r(2.0), "R")]),
                Relation::new("rho", "Delta", &[(r(-2.0), "Delta")]),
            ],
            interior: None,
            tolerance: RELATION_TOL,
        },
        "su2-pauli" => GeneratorSet {
            name: name.into(),
            generators: (1..=3).map(|j| (format!("sigma{j}"), sigma(j))).collect(),
            relations: vec![
                Relation::new("sigma1", "sigma2", &[(2.0 * I, "sigma3")]),
                Relation::new("sigma2", "sigma3", &[(2.0 * I, "sigma1")]),
                Relation::new("sigma3", "sigma1", &[(2.0 * I, "sigma2")]),
            ],
            interior: None,
            tolerance: RELATION_TOL,
        },
        "su11-pauli" => GeneratorSet {
            name: name.into(),
            generators: vec![
                ("K1".into(), m2([Z, r(0.5), r(-0.5), Z])),
                ("K2".into(), m2([Z, -0.5 * I, -0.5 * I, Z])),
                ("K0".into(), m2([r(0.5), Z, Z, r(-0.5)])),
            ],
            relations: vec![
                Relation::new("K1", "K2", &[(-I, "K0")]),
                Relation::new("K0", "K1", &[(I, "K2")]),
                Relation::new("K2", "K0", &[(I, "K1")]),
            ],
            interior: None,
            tolerance: RELATION_TOL,
        },
        "so3" => GeneratorSet {
            name: name.into(),
            generators: vec![
                ("Lx".into(), m3r([0., 0., 0., 0., 0., -1., 0., 1., 0.])),
                ("Ly".into(), m3r([0., 0., 1., 0., 0., 0., -1., 0., 0.])),
                ("Lz".into(), m3r([0., -1., 0., 1., 0., 0., 0., 0., 0.])),
            ],
            relations: vec![
                Relation::new("Lx", "Ly", &[(ONE, "Lz")]),
                Relation::new("Ly", "Lz", &[(ONE, "Lx")]),
                Relation::new("Lz", "Lx", &[(ONE, "Ly")]),
            ],
            interior: None,
            tolerance: RELATION_TOL,
        },
        "h3R" => GeneratorSet {
            name: name.into(),
            generators: vec![
                ("D".into(), m3r([0., 1., 0., 0., 0., 0., 0., 0., 0.])),
                ("X".into(), m3r([0., 0., 0., 0., 0., 1., 0., 0., 0.])),
                ("h".into(), m3r([0., 0., 1., 0., 0., 0., 0., 0., 0.])),
            ],
            relations: vec![
                Relation::new("D", "X", &[(ONE, "h")]),
                Relation::new("D", "h", &[]),
                Relation::new("X", "h", &[]),
            ],
            interior: None,
            tolerance: RELATION_TOL,
        },
        other => match parse_boson_size(other) {
            Some(n_max) => boson_su11(n_max)?,
            None => return Err(Error::Unknown(other.into())),
        },
    };
    Ok(set)
}

fn parse_boson_size(name: &str) -> Option<usize> {
    name.strip_prefix("su11-boson(")?.strip_suffix(')')?.trim().parse().ok()
}

/// `K+ = a†²/2`, `K- = a²/2`, `K0 = (a a† + a† a)/4` on a Fock truncation.
fn boson_su11(n_max: usize) -> Result<GeneratorSet> {
    let fock = make_fock(n_max)?;
    let a = fock.a();
    let ad = fock.adag();
    let kp = ad * ad * real(0.5);
    let km = a * a * real(0.5);
    let k0 = (a * ad + ad * a) * real(0.25);
    Ok(GeneratorSet {
        name: format!("su11-boson({n_max})"),
        generators: vec![("K+".into(), kp), ("K-".into(), km), ("K0".into(), k0)],
        relations: vec![
            Relation::new("K0", "K+", &[(ONE, "K+")]),
            Relation::new("K0", "K-", &[(-ONE, "K-")]),
            Relation::new("K+", "K-", &[(real(-2.0), "K0")]),
        ],
        interior: Some((n_max / 2).max(1)),
        tolerance: 1e-10,
    })
}

/// Parametric law of a catalogued observable in a state `u`.
pub type AtomFormula = fn(&[C64]) -> Vec<Atom>;

/// A catalogued observable with its reference law.
#[derive(Clone, Debug)]
pub struct CatalogObservable {
    pub name: String,
    pub matrix: HermitianOperator,
    /// Closed-form id of the characteristic function in the catalogue vacuum state.
    pub reference_cf: Option<&'static str>,
    pub reference_atoms: Option<AtomFormula>,
    /// Generator set whose vacuum applies, if any.
    pub vacuum_of: Option<&'static str>,
}

pub const OBSERVABLES: &[&str] = &[
    "sl2-H", "sl2-H0", "pauli-1", "pauli-2", "pauli-3", "su11-H", "casimir-so3", "h3-H",
];

fn atoms(pairs: &[(f64, f64)]) -> Vec<Atom> {
    pairs
        .iter()
        .map(|&(location, weight)| Atom { location, weight })
        .collect()
}

// Reference laws. For real states the sl2 and h3 forms reduce to the polynomials
// a² + 2ab - b² and (a + b + c)²; complex states use the conjugate-bilinear extension.

fn sl2_h_atoms(u: &[C64]) -> Vec<Atom> {
    let (a, b) = (u[0], u[1]);
    let c = a.norm_sqr() - b.norm_sqr() + 2.0 * (a.conj() * b).re;
    atoms(&[(-SQRT_2, 0.25 * (2.0 - SQRT_2 * c)), (SQRT_2, 0.25 * (2.0 + SQRT_2 * c))])
}

fn sl2_h0_atoms(u: &[C64]) -> Vec<Atom> {
    let s = (u[0].conj() * u[1]).re;
    atoms(&[(-1.0, 0.5 - s), (1.0, 0.5 + s)])
}

fn pauli1_atoms(u: &[C64]) -> Vec<Atom> {
    let (a, b) = (u[0], u[1]);
    let s = (b * a.conj() + a * b.conj()).re;
    atoms(&[(-1.0, 0.5 * (1.0 - s)), (1.0, 0.5 * (1.0 + s))])
}

fn pauli2_atoms(u: &[C64]) -> Vec<Atom> {
    let (a, b) = (u[0], u[1]);
    let s = (I * (a * b.conj() - b * a.conj())).re;
    atoms(&[(-1.0, 0.5 * (1.0 - s)), (1.0, 0.5 * (1.0 + s))])
}

fn pauli3_atoms(u: &[C64]) -> Vec<Atom> {
    atoms(&[(-1.0, u[1].norm_sqr()), (1.0, u[0].norm_sqr())])
}

fn su11_h_atoms(u: &[C64]) -> Vec<Atom> {
    let (a, b) = (u[0], u[1]);
    let one_i = C64::new(1.0, 1.0);
    let s = ((a + one_i * b) * a.conj() + (one_i.conj() * a - b) * b.conj()).re / SQRT_3;
    atoms(&[(-SQRT_3 / 2.0, 0.5 * (1.0 - s)), (SQRT_3 / 2.0, 0.5 * (1.0 + s))])
}

fn casimir_atoms(_u: &[C64]) -> Vec<Atom> {
    atoms(&[(-2.0, 1.0)])
}

fn h3_atoms(u: &[C64]) -> Vec<Atom> {
    let s = (u[0] + u[1] + u[2]).norm_sqr() / 3.0;
    atoms(&[(-1.0, 1.0 - s), (2.0, s)])
}

pub fn build_observable(name: &str) -> Result<CatalogObservable> {
    let obs = |matrix: CMatrix, cf, formula: AtomFormula, vac| -> Result<CatalogObservable> {
        Ok(CatalogObservable {
            name: name.to_string(),
            matrix: HermitianOperator::new(matrix)?.with_label(name),
            reference_cf: cf,
            reference_atoms: Some(formula),
            vacuum_of: vac,
        })
    };
    match name {
        "sl2-H" | "sl2-H0" => {
            let g = build_generators("sl2R")?;
            let (d, r, rho) = (g.get("Delta")?, g.get("R")?, g.get("rho")?);
            if name == "sl2-H" {
                obs(r - d + rho, Some("sl2-H-vacuum"), sl2_h_atoms, Some("sl2R"))
            } else {
                obs(r - d, Some("sl2-H0-vacuum"), sl2_h0_atoms, Some("sl2R"))
            }
        }
        "pauli-1" => obs(sigma(1), None, pauli1_atoms, None),
        "pauli-2" => obs(sigma(2), None, pauli2_atoms, None),
        "pauli-3" => obs(sigma(3), None, pauli3_atoms, None),
        "su11-H" => {
            let g = build_generators("su11-pauli")?;
            let m = (g.get("K1")? + g.get("K2")?) * I + g.get("K0")?;
            obs(m, Some("su11-H-vacuum"), su11_h_atoms, Some("su11-pauli"))
        }
        "casimir-so3" => {
            let g = build_generators("so3")?;
            let (x, y, z) = (g.get("Lx")?, g.get("Ly")?, g.get("Lz")?);
            obs(x * x + y * y + z * z, Some("casimir-so3"), casimir_atoms, None)
        }
        "h3-H" => {
            let g = build_generators("h3R")?;
            let s = g.get("D")? + g.get("X")? + g.get("h")?;
            let m = &s + s.transpose();
            obs(m, None, h3_atoms, None)
        }
        other => Err(Error::Unknown(other.into())),
    }
}

/// The vacuum of a generator set: annihilated by the lowering generator, an eigenvector of the weight generator.
///
/// `sl2R`: `Δu = 0`, `ρu = -u`, with the sign fixed to `(0, +1)`.
/// `su11-pauli`: `K-u = 0` for `K- = K1 - iK2`, `K0 u = -u/2`, giving `(0, 1)`; the
/// other basis state `(1, 0)` is returned by [`distinguished_states`].
pub fn fock_vacuum_state(name: &str) -> Result<StateVector> {
    match name {
        "sl2R" | "sl2-H" | "sl2-H0" | "su11-pauli" | "su11-H" => StateVector::basis(2, 1),
        other => match parse_boson_size(other) {
            Some(n_max) => Ok(make_fock(n_max)?.vacuum().clone()),
            None => Err(Error::Unknown(other.into())),
        },
    }
}

/// The two basis states for which the su(1,1) observable's law is displayed.
pub fn distinguished_states(name: &str) -> Result<Vec<StateVector>> {
    match name {
        "su11-pauli" | "su11-H" => Ok(vec![StateVector::basis(2, 0)?, StateVector::basis(2, 1)?]),
        other => Err(Error::Unknown(other.into())),
    }
}
