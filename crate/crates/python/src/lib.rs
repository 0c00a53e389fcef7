//! Python bindings for the multi-state truly-threshold analysis library.
//!
//! Exposes one class, `SystemSpec`, holding a validated system definition,
//! with methods for structure evaluation, boundary vectors, minimal and
//! disjoint expressions, exact probabilities, Karnaugh maps and the full
//! verification suite. Exact rationals cross the boundary as
//! `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use mvthresh_core as core;
use mvthresh_core::{
    format_ratio, ComponentDistribution, DistributionMode, LevelOverlays, MapFormat, MapLayout,
    Perspective, PreMethod, Ratio, StateCap, StateVector,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_perspective(s: &str) -> PyResult<Perspective> {
    s.parse().map_err(value_error)
}

fn parse_method(s: &str) -> PyResult<PreMethod> {
    s.parse().map_err(value_error)
}

fn parse_format(s: &str) -> PyResult<MapFormat> {
    match s {
        "text" => Ok(MapFormat::Text),
        "csv" => Ok(MapFormat::Csv),
        other => Err(value_error(format!(
            "unknown format {other:?}; use text or csv"
        ))),
    }
}

/// Accepts ints, floats and "a/b" strings; reports whether a float was seen.
fn ratio_from_py(value: &Bound<'_, PyAny>) -> PyResult<(Ratio, bool)> {
    if let Ok(i) = value.extract::<i64>() {
        return Ok((Ratio::from_integer(i.into()), false));
    }
    if let Ok(f) = value.extract::<f64>() {
        let r = Ratio::from_float(f)
            .ok_or_else(|| value_error(format!("non-finite number {f}")))?;
        return Ok((r, true));
    }
    let s: String = value.extract()?;
    core::parse_ratio(&s).map(|r| (r, false)).map_err(value_error)
}

fn fraction<'py>(py: Python<'py>, r: &Ratio) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_ratio(r),))
}

fn fractions<'py>(py: Python<'py>, values: &[Ratio]) -> PyResult<Bound<'py, PyList>> {
    let items: Vec<Bound<'py, PyAny>> = values
        .iter()
        .map(|r| fraction(py, r))
        .collect::<PyResult<_>>()?;
    PyList::new(py, items)
}

fn vectors_to_py(vectors: &[StateVector]) -> Vec<Vec<u32>> {
    vectors.iter().map(|v| v.values().to_vec()).collect()
}

/// A validated multi-state truly-threshold system definition.
#[pyclass]
struct SystemSpec {
    spec: core::SystemSpec,
    cap: StateCap,
}

impl SystemSpec {
    fn state(&self, values: Vec<u32>) -> StateVector {
        StateVector::new(values)
    }

    fn distribution(&self, dist: Option<&Bound<'_, PyAny>>) -> PyResult<ComponentDistribution> {
        let Some(dist) = dist else {
            return Ok(ComponentDistribution::uniform(&self.spec));
        };
        if let Ok(name) = dist.extract::<String>() {
            if name == "uniform" {
                return Ok(ComponentDistribution::uniform(&self.spec));
            }
            return Err(value_error(format!(
                "unknown distribution {name:?}; pass \"uniform\" or per-component masses"
            )));
        }
        let rows: Vec<Vec<Bound<'_, PyAny>>> = dist.extract()?;
        let mut masses = Vec::new();
        let mut any_float = false;
        for row in rows {
            let mut converted = Vec::new();
            for value in row {
                let (r, was_float) = ratio_from_py(&value)?;
                any_float |= was_float;
                converted.push(r);
            }
            masses.push(converted);
        }
        let mode = if any_float {
            DistributionMode::Float
        } else {
            DistributionMode::Exact
        };
        ComponentDistribution::new(&self.spec, masses, mode).map_err(value_error)
    }
}

#[pymethods]
impl SystemSpec {
    /// SystemSpec(max_states, weights, thresholds, state_cap=10_000_000)
    ///
    /// Weights and thresholds accept ints, floats and exact "a/b" strings.
    #[new]
    #[pyo3(signature = (max_states, weights, thresholds, state_cap = 10_000_000))]
    fn new(
        max_states: Vec<u32>,
        weights: Vec<Bound<'_, PyAny>>,
        thresholds: Vec<Bound<'_, PyAny>>,
        state_cap: u64,
    ) -> PyResult<Self> {
        let weights: Vec<Ratio> = weights
            .iter()
            .map(|w| ratio_from_py(w).map(|(r, _)| r))
            .collect::<PyResult<_>>()?;
        let thresholds: Vec<Ratio> = thresholds
            .iter()
            .map(|t| ratio_from_py(t).map(|(r, _)| r))
            .collect::<PyResult<_>>()?;
        let spec = core::SystemSpec::new(max_states, weights, thresholds).map_err(value_error)?;
        Ok(SystemSpec {
            spec,
            cap: StateCap(state_cap),
        })
    }

    #[getter]
    fn component_count(&self) -> usize {
        self.spec.component_count()
    }

    #[getter]
    fn top_level(&self) -> u32 {
        self.spec.top_level()
    }

    #[getter]
    fn state_space_size(&self) -> u128 {
        self.spec.state_space_size()
    }

    /// The structure function value at a state vector.
    fn evaluate(&self, state: Vec<u32>) -> PyResult<u32> {
        self.spec.evaluate(&self.state(state)).map_err(value_error)
    }

    /// True iff the weighted sum reaches the level's threshold.
    fn level_success(&self, state: Vec<u32>, level: u32) -> PyResult<bool> {
        self.spec
            .level_success(&self.state(state), level)
            .map_err(value_error)
    }

    /// Exact weighted sum of a state, as a Fraction.
    fn weighted_sum<'py>(&self, py: Python<'py>, state: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
        let sum = self.spec.weighted_sum(&self.state(state)).map_err(value_error)?;
        fraction(py, &sum)
    }

    /// Minimal upper vectors of a level, lexicographically descending.
    fn muvs(&self, level: u32) -> PyResult<Vec<Vec<u32>>> {
        let set = core::enumerate_muvs(&self.spec, level, self.cap).map_err(value_error)?;
        Ok(vectors_to_py(&set.vectors))
    }

    /// Maximal lower vectors of a level, lexicographically descending.
    fn mlvs(&self, level: u32) -> PyResult<Vec<Vec<u32>>> {
        let set = core::enumerate_mlvs(&self.spec, level, self.cap).map_err(value_error)?;
        Ok(vectors_to_py(&set.vectors))
    }

    /// Orbit summary of a boundary set: [(representative, count), ...].
    #[pyo3(signature = (level, kind = "muv"))]
    fn orbits(&self, level: u32, kind: &str) -> PyResult<Vec<(Vec<u32>, usize)>> {
        let set = match kind {
            "muv" => core::enumerate_muvs(&self.spec, level, self.cap),
            "mlv" => core::enumerate_mlvs(&self.spec, level, self.cap),
            other => return Err(value_error(format!("unknown kind {other:?}; use muv or mlv"))),
        }
        .map_err(value_error)?;
        Ok(set
            .orbit_summary
            .iter()
            .map(|(v, c)| (v.values().to_vec(), *c))
            .collect())
    }

    /// Minimal sum-of-products for the level function, as text.
    #[pyo3(signature = (level, perspective = "success", ascii = true))]
    fn minimal_sop(&self, level: u32, perspective: &str, ascii: bool) -> PyResult<String> {
        let sop = core::minimal_sop(&self.spec, level, parse_perspective(perspective)?, self.cap)
            .map_err(value_error)?;
        Ok(sop.render(&self.spec, ascii))
    }

    /// Probability-ready expression for the level function.
    ///
    /// Returns {"expression": str, "terms": int, "shellable": bool | None}.
    #[pyo3(signature = (level, perspective = "success", method = "shelling", ascii = true))]
    fn pre<'py>(
        &self,
        py: Python<'py>,
        level: u32,
        perspective: &str,
        method: &str,
        ascii: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let result = core::pre_for(
            &self.spec,
            level,
            parse_perspective(perspective)?,
            parse_method(method)?,
            self.cap,
        )
        .map_err(value_error)?;
        let out = PyDict::new(py);
        out.set_item("expression", result.expression.render(&self.spec, ascii))?;
        out.set_item("terms", result.expression.term_count())?;
        out.set_item("shellable", result.shellable)?;
        Ok(out)
    }

    /// Disjoint expression for the exact-level indicator S = j.
    #[pyo3(signature = (level, method = "shelling", ascii = true))]
    fn instance_expression(&self, level: u32, method: &str, ascii: bool) -> PyResult<String> {
        let e = core::instance_expression(&self.spec, level, parse_method(method)?, self.cap)
            .map_err(value_error)?;
        Ok(e.render(&self.spec, ascii))
    }

    /// Coherence scan: {"causal", "monotone", "relevant", "coherent"}.
    fn coherence<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = core::check_coherence(&self.spec, self.cap).map_err(value_error)?;
        let out = PyDict::new(py);
        out.set_item("causal", report.causal)?;
        out.set_item("monotone", report.monotone)?;
        out.set_item("relevant", report.relevant.clone())?;
        out.set_item("coherent", report.coherent())?;
        Ok(out)
    }

    /// True iff every component pair can be swapped without changing S.
    fn totally_symmetric(&self) -> PyResult<bool> {
        Ok(core::check_total_symmetry(&self.spec, self.cap)
            .map_err(value_error)?
            .totally_symmetric)
    }

    /// True iff every level depends only on same-level component successes.
    fn binary_imaged(&self) -> PyResult<bool> {
        let muvs: Vec<_> = (1..=self.spec.top_level())
            .map(|j| core::enumerate_muvs(&self.spec, j, self.cap))
            .collect::<core::Result<_>>()
            .map_err(value_error)?;
        let mlvs: Vec<_> = (0..self.spec.top_level())
            .map(|j| core::enumerate_mlvs(&self.spec, j, self.cap))
            .collect::<core::Result<_>>()
            .map_err(value_error)?;
        Ok(core::check_binary_imaged(&self.spec, &muvs, &mlvs)
            .map_err(value_error)?
            .overall)
    }

    /// Exact level probabilities.
    ///
    /// `dist` is "uniform" (default) or per-component mass lists; entries
    /// may be ints, floats or "a/b" strings. Returns Fractions.
    #[pyo3(signature = (dist = None, perspective = "success", method = "shelling"))]
    fn level_probabilities<'py>(
        &self,
        py: Python<'py>,
        dist: Option<&Bound<'py, PyAny>>,
        perspective: &str,
        method: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = self.distribution(dist)?;
        let method = parse_method(method)?;
        let report = match parse_perspective(perspective)? {
            Perspective::Success => {
                core::level_probabilities_success(&self.spec, &d, method, self.cap)
            }
            Perspective::Failure => {
                core::level_probabilities_failure(&self.spec, &d, method, self.cap)
            }
        }
        .map_err(value_error)?;
        let out = PyDict::new(py);
        out.set_item("exactly", fractions(py, &report.exactly)?)?;
        out.set_item("at_least", fractions(py, &report.at_least)?)?;
        out.set_item("at_most", fractions(py, &report.at_most)?)?;
        out.set_item("oracle_agrees", report.oracle_agrees)?;
        Ok(out)
    }

    /// The structure-function Karnaugh map.
    #[pyo3(signature = (format = "text"))]
    fn structure_map(&self, format: &str) -> PyResult<String> {
        let layout = MapLayout::default_for(&self.spec);
        core::render_structure_map(&self.spec, &layout, parse_format(format)?, self.cap)
            .map_err(value_error)
    }

    /// The weighted-sum Karnaugh map.
    #[pyo3(signature = (format = "text"))]
    fn sum_map(&self, format: &str) -> PyResult<String> {
        let layout = MapLayout::default_for(&self.spec);
        core::render_sum_map(&self.spec, &layout, parse_format(format)?, self.cap)
            .map_err(value_error)
    }

    /// A per-level binary map with optional boundary and cover overlays.
    #[pyo3(signature = (level, perspective = "success", boundary = false, cover = None, format = "text"))]
    fn level_map(
        &self,
        level: u32,
        perspective: &str,
        boundary: bool,
        cover: Option<&str>,
        format: &str,
    ) -> PyResult<String> {
        let layout = MapLayout::default_for(&self.spec);
        let overlays = LevelOverlays {
            boundary,
            cover: cover.map(parse_method).transpose()?,
        };
        core::render_level_map(
            &self.spec,
            &layout,
            level,
            parse_perspective(perspective)?,
            overlays,
            parse_format(format)?,
            self.cap,
        )
        .map_err(value_error)
    }

    /// The exhaustively evaluated state table as CSV text.
    fn state_table_csv(&self) -> PyResult<String> {
        let table = core::build_table(&self.spec, self.cap).map_err(value_error)?;
        Ok(table.to_csv(&self.spec))
    }

    /// Runs the full cross-check suite.
    ///
    /// Returns {"passed": bool, "checks": [(name, passed, detail), ...]}.
    #[pyo3(signature = (dist = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        dist: Option<&Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = self.distribution(dist)?;
        let report =
            core::run_full_verification(&self.spec, Some(&d), self.cap).map_err(value_error)?;
        let out = PyDict::new(py);
        out.set_item("passed", report.all_passed())?;
        let checks: Vec<(String, bool, String)> = report
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.passed, c.detail.clone()))
            .collect();
        out.set_item("checks", checks)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "SystemSpec(components={}, levels=0..={}, states={})",
            self.spec.component_count(),
            self.spec.top_level(),
            self.spec.state_space_size()
        )
    }
}

#[pymodule]
fn mvthresh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SystemSpec>()?;
    Ok(())
}
