//! Built-in example algebras.

use thiserror::Error;

use crate::classify::{construct_double, DoubleError};
use crate::format::AlgebraFile;
use crate::liealg::StructureConstants;
use crate::linalg::matrix::unit;
use crate::linalg::Matrix;
use crate::scalar::{int, Rational};
use crate::tensor::wedge;

pub const FIXED_NAMES: &[&str] = &[
    "dim6-free2step",
    "dim8-double",
    "h1-plus-h1",
    "h1-plus-abelian2",
    "solvable-counterexample",
];

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("unknown example '{0}'; try 'examples list'")]
    Unknown(String),
    #[error("heisenberg-N needs N ≥ 1")]
    BadHeisenbergRank,
    #[error(transparent)]
    Double(#[from] DoubleError),
}

fn named(
    n: usize,
    names: &[&str],
    brackets: &[(usize, usize, usize)],
) -> StructureConstants<Rational> {
    let mut c =
        StructureConstants::new(n).with_names(names.iter().map(|s| s.to_string()).collect());
    for &(i, j, k) in brackets {
        c.set_bracket(i, j, &[(k, int(1))]);
    }
    c
}

/// `h_n`: `[x_i, y_i] = z`.
pub fn heisenberg(rank: usize) -> StructureConstants<Rational> {
    let n = 2 * rank + 1;
    let names: Vec<String> = (1..=rank)
        .map(|i| format!("x{i}"))
        .chain((1..=rank).map(|i| format!("y{i}")))
        .chain(std::iter::once("z".to_string()))
        .collect();
    let mut c = StructureConstants::new(n).with_names(names);
    for i in 0..rank {
        c.set_bracket(i, rank + i, &[(2 * rank, int(1))]);
    }
    c
}

/// Free 2-step algebra on three generators.
pub fn dim6_free2step() -> StructureConstants<Rational> {
    named(
        6,
        &["e1", "e2", "e3", "e4", "e5", "e6"],
        &[(0, 1, 3), (0, 2, 4), (1, 2, 5)],
    )
}

/// Skew generators `e₁∧e₂`, `e₂∧e₃` of the dimension-8 double.
pub fn dim8_generators() -> Vec<Matrix<Rational>> {
    vec![
        wedge(&unit(3, 0), &unit(3, 1)),
        wedge(&unit(3, 1), &unit(3, 2)),
    ]
}

/// `[e1,e2] = z1 = [e4,e5]`, `[e2,e3] = z2 = [e5,e6]`, with its indecomposable tensor.
pub fn dim8_double() -> (StructureConstants<Rational>, Matrix<Rational>) {
    let (alg, s) = construct_double(&dim8_generators()).expect("fixed generators are valid");
    (alg.structure_constants().clone(), s)
}

pub fn h1_plus_h1() -> StructureConstants<Rational> {
    named(
        6,
        &["x1", "y1", "z1", "x2", "y2", "z2"],
        &[(0, 1, 2), (3, 4, 5)],
    )
}

pub fn h1_plus_abelian2() -> StructureConstants<Rational> {
    named(5, &["x1", "y1", "z1", "a1", "a2"], &[(0, 1, 2)])
}

/// Solvable but not nilpotent; the validator must reject it.
pub fn solvable_counterexample() -> StructureConstants<Rational> {
    let mut c = StructureConstants::new(3);
    c.set_bracket(1, 2, &[(0, int(1))]);
    c.set_bracket(2, 0, &[(1, int(1))]);
    c
}

/// Names accepted by [`lookup`]; `heisenberg-N` stands for any `N ≥ 1`.
pub fn list() -> Vec<&'static str> {
    let mut v = vec!["heisenberg-N"];
    v.extend_from_slice(FIXED_NAMES);
    v
}

/// Algebra file for a catalog name, including any distinguished tensors.
pub fn lookup(name: &str) -> Result<AlgebraFile, CatalogError> {
    if let Some(rank) = name.strip_prefix("heisenberg-") {
        let rank: usize = rank
            .parse()
            .map_err(|_| CatalogError::Unknown(name.into()))?;
        if rank == 0 {
            return Err(CatalogError::BadHeisenbergRank);
        }
        return Ok(AlgebraFile::new(heisenberg(rank)));
    }
    let file = match name {
        "dim6-free2step" => AlgebraFile::new(dim6_free2step()),
        "dim8-double" => {
            let (c, s) = dim8_double();
            let mut f = AlgebraFile::new(c);
            f.tensors.push(("S".into(), s));
            f
        }
        "h1-plus-h1" => AlgebraFile::new(h1_plus_h1()),
        "h1-plus-abelian2" => AlgebraFile::new(h1_plus_abelian2()),
        "solvable-counterexample" => AlgebraFile::new(solvable_counterexample()),
        _ => return Err(CatalogError::Unknown(name.into())),
    };
    Ok(file)
}

/// Algebra from the doubling construction, with its distinguished tensor.
pub fn double(generators: &[Matrix<Rational>]) -> Result<AlgebraFile, CatalogError> {
    let (alg, s) = construct_double(generators)?;
    let mut f = AlgebraFile::new(alg.structure_constants().clone());
    f.tensors.push(("S".into(), s));
    Ok(f)
}

/// Every valid fixed-size catalog algebra used by the test suites.
pub fn valid_examples() -> Vec<(String, StructureConstants<Rational>)> {
    let mut v: Vec<(String, StructureConstants<Rational>)> = (1..=3)
        .map(|r| (format!("heisenberg-{r}"), heisenberg(r)))
        .collect();
    v.push(("dim6-free2step".into(), dim6_free2step()));
    v.push(("dim8-double".into(), dim8_double().0));
    v.push(("h1-plus-h1".into(), h1_plus_h1()));
    v.push(("h1-plus-abelian2".into(), h1_plus_abelian2()));
    v
}
