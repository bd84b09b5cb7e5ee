//! Python bindings for the shuffle-algebra CoHA toolkit. Structured values
//! (elements, reports, preimages) cross the boundary as JSON strings so the
//! Python side stays dependency-free.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use shuffle_coha::{
    degenerate, express_in_generators, graded_dimension_census, k_express_in_generators,
    k_wheel_check, kappa, kappa_tilde, serialize, shuffle_mul, wheel_check, DimVector, Error,
    Flavor, Quiver as CoreQuiver, ShuffleElement as CoreElement, SolverLimits, VerifyPath,
};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_flavor(s: &str) -> PyResult<Flavor> {
    match s {
        "coh" => Ok(Flavor::Cohomological),
        "k" => Ok(Flavor::KTheoretic),
        other => Err(PyValueError::new_err(format!(
            "flavor must be 'coh' or 'k', got {other:?}"
        ))),
    }
}

/// A finite quiver: vertex names and directed edges.
#[pyclass(frozen)]
#[derive(Clone)]
struct Quiver(CoreQuiver);

#[pymethods]
impl Quiver {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Self> {
        Ok(Quiver(CoreQuiver::new(vertices, edges).map_err(err)?))
    }

    /// The quiver with one vertex "1" and g loops.
    #[staticmethod]
    fn loop_quiver(g: usize) -> Quiver {
        Quiver(CoreQuiver::loop_quiver(g))
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Quiver> {
        Ok(Quiver(CoreQuiver::from_json(text).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Quiver(vertices={:?}, edges={:?})",
            self.0.vertices, self.0.edges
        )
    }

    fn __eq__(&self, other: &Quiver) -> bool {
        self.0 == other.0
    }
}

/// An element of the shuffle algebra: a symmetric polynomial (or Laurent
/// polynomial) tagged with its quiver, dimension vector, and flavor.
#[pyclass(frozen)]
#[derive(Clone)]
struct ShuffleElement(CoreElement);

#[pymethods]
impl ShuffleElement {
    /// The single-variable generator z^d (flavor "coh") or w^d ("k") at a
    /// vertex.
    #[staticmethod]
    fn generator(quiver: &Quiver, vertex: &str, d: i32, flavor: &str) -> PyResult<Self> {
        let f = parse_flavor(flavor)?;
        Ok(ShuffleElement(
            CoreElement::generator(quiver.0.clone(), vertex, d, f).map_err(err)?,
        ))
    }

    /// kappa_{i,n,d}: the cohomological spherical generator family.
    #[staticmethod]
    fn kappa(quiver: &Quiver, vertex: &str, n: u32, d: u32) -> PyResult<Self> {
        Ok(ShuffleElement(kappa(&quiver.0, vertex, n, d).map_err(err)?))
    }

    /// kappa~_{i,n,d}: the K-theoretic analogue.
    #[staticmethod]
    fn kappa_tilde(quiver: &Quiver, vertex: &str, n: u32, d: u32) -> PyResult<Self> {
        Ok(ShuffleElement(
            kappa_tilde(&quiver.0, vertex, n, d).map_err(err)?,
        ))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(ShuffleElement(CoreElement::from_json(&v).map_err(err)?))
    }

    fn to_json(&self) -> String {
        self.0.to_json().to_string()
    }

    fn flavor(&self) -> String {
        self.0.flavor.to_string()
    }

    fn dim(&self) -> Vec<(String, u32)> {
        self.0.dim.0.iter().map(|(k, &v)| (k.clone(), v)).collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The shuffle product (flavor-appropriate kernel).
    fn mul(&self, other: &ShuffleElement) -> PyResult<Self> {
        Ok(ShuffleElement(shuffle_mul(&self.0, &other.0).map_err(err)?))
    }

    fn __mul__(&self, other: &ShuffleElement) -> PyResult<Self> {
        self.mul(other)
    }

    fn add(&self, other: &ShuffleElement) -> PyResult<Self> {
        Ok(ShuffleElement(self.0.add(&other.0).map_err(err)?))
    }

    fn __add__(&self, other: &ShuffleElement) -> PyResult<Self> {
        self.add(other)
    }

    fn __eq__(&self, other: &ShuffleElement) -> bool {
        self.0 == other.0
    }

    /// True when every wheel condition vanishes on this element.
    fn wheel_check(&self) -> PyResult<bool> {
        match self.0.flavor {
            Flavor::Cohomological => wheel_check(&self.0).map_err(err),
            Flavor::KTheoretic => k_wheel_check(&self.0).map_err(err),
        }
    }

    /// Express the element in single-variable generators; returns the
    /// kernel preimage f as a JSON rational function.
    fn express_in_generators(&self) -> PyResult<String> {
        let f = match self.0.flavor {
            Flavor::Cohomological => express_in_generators(&self.0).map_err(err)?.f,
            Flavor::KTheoretic => k_express_in_generators(&self.0).map_err(err)?.f,
        };
        Ok(serialize::ratfn_to_json(&f).to_string())
    }

    /// The cohomological lowest-degree limit of a K-theoretic element.
    fn degenerate(&self) -> PyResult<Self> {
        Ok(ShuffleElement(degenerate(&self.0).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "ShuffleElement(flavor={}, dim={:?})",
            self.0.flavor, self.0.dim.0
        )
    }
}

/// Run the generation-theorem pipeline for kappa_{1,n,d} on the g-loop
/// quiver; path is "direct", "k-then-degenerate", or "both". Returns the
/// JSON report.
#[pyfunction]
#[pyo3(signature = (g, n, d, path = "direct"))]
fn verify_theorem(g: usize, n: u32, d: u32, path: &str) -> PyResult<String> {
    let p = match path {
        "direct" => VerifyPath::Direct,
        "k-then-degenerate" => VerifyPath::KThenDegenerate,
        "both" => VerifyPath::Both,
        other => {
            return Err(PyValueError::new_err(format!(
                "path must be 'direct', 'k-then-degenerate', or 'both', got {other:?}"
            )))
        }
    };
    let report =
        shuffle_coha::verify_theorem(g, n, d, p, SolverLimits::default()).map_err(err)?;
    Ok(report.to_string())
}

/// Marginal dimensions (wheel_dim, subalg_dim) at the given alphabet degree
/// for dimension n at a vertex of the quiver.
#[pyfunction]
fn census(quiver: &Quiver, vertex: &str, n: u32, degree: i32) -> PyResult<(usize, usize)> {
    let dim = DimVector::scaled_unit(vertex, n);
    graded_dimension_census(&quiver.0, &dim, degree, SolverLimits::default()).map_err(err)
}

#[pymodule]
fn shuffle_coha_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Quiver>()?;
    m.add_class::<ShuffleElement>()?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    Ok(())
}
