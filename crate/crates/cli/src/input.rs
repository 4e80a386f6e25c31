//! Loading algebras and tensors from files or the built-in catalog.

use std::fs;
use std::path::Path;

use nilkilling::catalog;
use nilkilling::classify::decomposable_killing_space;
use nilkilling::format::{self, AlgebraFile, Metric};
use nilkilling::killing::killing_space;
use nilkilling::liealg::{orthonormalize, validate, MetricLieAlgebra};
use nilkilling::linalg::Matrix;
use nilkilling::scalar::{Rational, Scalar};
use nilkilling::tensor::{MatrixSpace, Symmetry};

use crate::error::CliError;
use crate::{Source, TensorSelection};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_file(path: &Path) -> Result<AlgebraFile, CliError> {
    format::parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// The unvalidated algebra file named by `source`.
pub fn load(source: &Source) -> Result<AlgebraFile, CliError> {
    match (&source.path, &source.example) {
        (Some(path), None) => parse_file(path),
        (None, Some(name)) => {
            if let Some(genfile) = name
                .strip_prefix("double(")
                .and_then(|r| r.strip_suffix(')'))
            {
                let path = Path::new(genfile);
                let generators =
                    format::parse_generators(&read(path)?).map_err(|source| CliError::Parse {
                        path: genfile.to_string(),
                        source,
                    })?;
                Ok(catalog::double(&generators)?)
            } else {
                Ok(catalog::lookup(name)?)
            }
        }
        (None, None) => Err(CliError::Usage(
            "give an algebra file or --example NAME".into(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either a file or --example, not both".into(),
        )),
    }
}

/// Tensors with their report labels.
pub type NamedTensors<F> = Vec<(String, Matrix<F>)>;

/// A validated algebra with its tensors in the algebra's field.
pub enum Prepared {
    Exact {
        algebra: MetricLieAlgebra<Rational>,
        tensors: NamedTensors<Rational>,
    },
    /// Gram-matrix input, re-expressed in an orthonormal basis.
    Float {
        algebra: MetricLieAlgebra<f64>,
        tensors: NamedTensors<f64>,
    },
}

impl Prepared {
    pub fn mode(&self) -> &'static str {
        match self {
            Prepared::Exact { .. } => "exact",
            Prepared::Float { .. } => "float",
        }
    }
}

fn check_shape(name: &str, t: &Matrix<Rational>, n: usize) -> Result<(), CliError> {
    if t.rows() != n || t.cols() != n {
        return Err(CliError::Usage(format!(
            "tensor '{name}' is {}×{}, algebra has dimension {n}",
            t.rows(),
            t.cols()
        )));
    }
    Ok(())
}

/// Tensors named on the command line, in the original basis of the file.
fn selected_tensors(
    file: &AlgebraFile,
    sel: &TensorSelection,
) -> Result<Vec<(String, Matrix<Rational>)>, CliError> {
    let n = file.constants.dim();
    let mut out = Vec::new();
    if sel.all_killing_basis && sel.tensors.is_empty() {
        out.extend(file.tensors.iter().cloned());
    }
    for name in &sel.tensors {
        let t = file.tensor(name).ok_or_else(|| {
            CliError::Usage(format!("no tensor named '{name}' in the algebra file"))
        })?;
        out.push((name.clone(), t.clone()));
    }
    if let Some(path) = &sel.tensor_file {
        let extra = parse_file(path)?;
        if extra.tensors.is_empty() {
            return Err(CliError::Usage(format!(
                "{}: no tensors found",
                path.display()
            )));
        }
        for (name, t) in extra.tensors {
            check_shape(&name, &t, n)?;
            out.push((name, t));
        }
    }
    Ok(out)
}

/// Validates the algebra and resolves the tensor selection. The Killing
/// basis is prepended when `killing_basis` is set; with `require_tensors`, an
/// empty selection is a usage error.
pub fn prepare(
    source: &Source,
    sel: &TensorSelection,
    killing_basis: bool,
    require_tensors: bool,
) -> Result<Prepared, CliError> {
    let file = load(source)?;
    let mut tensors = selected_tensors(&file, sel)?;
    match &file.metric {
        Metric::Identity => {
            let algebra = validate(file.constants).map_err(CliError::Invalid)?;
            if killing_basis {
                tensors = adapted_killing_basis(&algebra, tensors)?;
            }
            check_nonempty(&tensors, require_tensors)?;
            Ok(Prepared::Exact { algebra, tensors })
        }
        Metric::Gram(gram) => {
            let ortho = orthonormalize(&file.constants.to_float(), &gram.to_float())?;
            let mut tensors: Vec<(String, Matrix<f64>)> = tensors
                .into_iter()
                .map(|(name, t)| (name, ortho.transform_form(&t.to_float())))
                .collect();
            if killing_basis {
                tensors = adapted_killing_basis(&ortho.algebra, tensors)?;
            }
            check_nonempty(&tensors, require_tensors)?;
            Ok(Prepared::Float {
                algebra: ortho.algebra,
                tensors,
            })
        }
    }
}

/// A Killing basis that starts with a basis of the decomposable subspace and
/// is completed by the given tensors where possible, then by canonical basis
/// elements. Given tensors used for the completion keep their names and are
/// not repeated; the rest follow the basis.
fn adapted_killing_basis<F: Scalar>(
    alg: &MetricLieAlgebra<F>,
    given: Vec<(String, Matrix<F>)>,
) -> Result<Vec<(String, Matrix<F>)>, CliError> {
    let n = alg.dim();
    let killing = killing_space(alg);
    let mut basis: Vec<(String, Matrix<F>)> = decomposable_killing_space(alg)?
        .basis()
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("killing[{i}]"), s.clone()))
        .collect();
    let spans = |basis: &[(String, Matrix<F>)], t: &Matrix<F>| {
        let mats: Vec<Matrix<F>> = basis.iter().map(|(_, m)| m.clone()).collect();
        MatrixSpace::span(Symmetry::Symmetric, n, &mats).contains(t)
    };
    let mut rest = Vec::new();
    for (name, t) in given {
        if killing.contains(&t) && !spans(&basis, &t) {
            basis.push((name, t));
        } else {
            rest.push((name, t));
        }
    }
    for t in killing.basis() {
        if !spans(&basis, t) {
            basis.push((format!("killing[{}]", basis.len()), t.clone()));
        }
    }
    basis.extend(rest);
    Ok(basis)
}

fn check_nonempty<T>(tensors: &[T], required: bool) -> Result<(), CliError> {
    if required && tensors.is_empty() {
        return Err(CliError::Usage(
            "no tensors selected; use --tensor NAME, --tensor-file FILE or --all-killing-basis"
                .into(),
        ));
    }
    Ok(())
}
