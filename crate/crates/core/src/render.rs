//! Text and CSV rendering of multi-valued Karnaugh maps: the structure
//! function, the weighted-sum map, and per-level binary maps with optional
//! boundary-vector and disjoint-cover overlays.

use crate::boundary::{enumerate_mlvs, enumerate_muvs};
use crate::disjoint::{pre_for, PreMethod};
use crate::error::{Error, Result};
use crate::expr::{LiteralStyle, Perspective, ProductTerm};
use crate::system::{format_ratio, StateCap, StateVector, SystemSpec};

/// Which variables run along the columns and rows. The first variable of
/// each axis is the outermost (slowest changing); orderings are natural
/// ascending, not Gray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapLayout {
    pub column_vars: Vec<usize>,
    pub row_vars: Vec<usize>,
}

impl MapLayout {
    /// Default layout: the first half of the variables on the
    /// columns, the rest on the rows.
    pub fn default_for(spec: &SystemSpec) -> Self {
        let n = spec.component_count();
        let split = n.div_ceil(2);
        MapLayout {
            column_vars: (0..split).collect(),
            row_vars: (split..n).collect(),
        }
    }

    fn validate(&self, spec: &SystemSpec) -> Result<()> {
        let n = spec.component_count();
        let mut seen = vec![false; n];
        for &v in self.column_vars.iter().chain(&self.row_vars) {
            if v >= n || seen[v] {
                return Err(Error::InvalidArgument(format!(
                    "map layout must list every variable exactly once; problem at X{}",
                    v + 1
                )));
            }
            seen[v] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidArgument(
                "map layout must cover all variables".into(),
            ));
        }
        if self.column_vars.is_empty() {
            return Err(Error::InvalidArgument(
                "map layout needs at least one column variable".into(),
            ));
        }
        Ok(())
    }
}

/// Overlays for a per-level binary map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelOverlays {
    /// Mark the boundary cells: MUVs of the level on success maps, MLVs of
    /// the level below on failure maps.
    pub boundary: bool,
    /// Mark each disjoint-cover term's cells with its own letter.
    pub cover: Option<PreMethod>,
}

const TEXT_CELL_LIMIT: u64 = 4096;
const TEXT_VAR_LIMIT: usize = 6;

struct Grid {
    col_headers: Vec<(String, Vec<String>)>,
    row_var_names: Vec<String>,
    row_labels: Vec<Vec<String>>,
    cells: Vec<Vec<String>>,
    legend: Vec<String>,
}

fn axis_assignments(spec: &SystemSpec, vars: &[usize]) -> Vec<Vec<u32>> {
    let mut assignments = vec![Vec::new()];
    for &v in vars {
        let mut next = Vec::new();
        for prefix in &assignments {
            for value in 0..=spec.max_state(v) {
                let mut a = prefix.clone();
                a.push(value);
                next.push(a);
            }
        }
        assignments = next;
    }
    assignments
}

fn build_grid(
    spec: &SystemSpec,
    layout: &MapLayout,
    mut content: impl FnMut(&StateVector) -> String,
    legend: Vec<String>,
) -> Grid {
    let cols = axis_assignments(spec, &layout.column_vars);
    let rows = axis_assignments(spec, &layout.row_vars);

    let col_headers = layout
        .column_vars
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            (
                format!("X{}", v + 1),
                cols.iter().map(|c| c[i].to_string()).collect(),
            )
        })
        .collect();
    let row_var_names = layout.row_vars.iter().map(|&v| format!("X{}", v + 1)).collect();
    let row_labels = rows
        .iter()
        .map(|r| r.iter().map(|v| v.to_string()).collect())
        .collect();

    let n = spec.component_count();
    let cells = rows
        .iter()
        .map(|row_assign| {
            cols.iter()
                .map(|col_assign| {
                    let mut values = vec![0u32; n];
                    for (i, &v) in layout.column_vars.iter().enumerate() {
                        values[v] = col_assign[i];
                    }
                    for (i, &v) in layout.row_vars.iter().enumerate() {
                        values[v] = row_assign[i];
                    }
                    content(&StateVector::new(values))
                })
                .collect()
        })
        .collect();

    Grid {
        col_headers,
        row_var_names,
        row_labels,
        cells,
        legend,
    }
}

fn grid_to_text(grid: &Grid) -> String {
    let gutter = grid.row_var_names.len().max(1);
    let mut width = 0usize;
    for (name, values) in &grid.col_headers {
        width = width.max(name.len());
        for v in values {
            width = width.max(v.len());
        }
    }
    for name in &grid.row_var_names {
        width = width.max(name.len());
    }
    for labels in &grid.row_labels {
        for l in labels {
            width = width.max(l.len());
        }
    }
    for row in &grid.cells {
        for c in row {
            width = width.max(c.len());
        }
    }
    let width = width + 2;

    let mut lines: Vec<String> = Vec::new();
    for (name, values) in &grid.col_headers {
        let mut line = String::new();
        for g in 0..gutter {
            let token = if g + 1 == gutter { name.as_str() } else { "" };
            line.push_str(&format!("{token:>width$}"));
        }
        for v in values {
            line.push_str(&format!("{v:>width$}"));
        }
        lines.push(line);
    }
    if !grid.row_var_names.is_empty() {
        let mut line = String::new();
        for name in &grid.row_var_names {
            line.push_str(&format!("{name:>width$}"));
        }
        lines.push(line);
    }
    for (labels, row) in grid.row_labels.iter().zip(&grid.cells) {
        let mut line = String::new();
        if labels.is_empty() {
            line.push_str(&format!("{:>width$}", ""));
        }
        for l in labels {
            line.push_str(&format!("{l:>width$}"));
        }
        for c in row {
            line.push_str(&format!("{c:>width$}"));
        }
        lines.push(line);
    }

    let mut out = lines
        .iter()
        .map(|l| l.trim_end())
        .collect::<Vec<_>>()
        .join("\n");
    out.push('\n');
    if !grid.legend.is_empty() {
        out.push('\n');
        out.push_str("legend:\n");
        for entry in &grid.legend {
            out.push_str("  ");
            out.push_str(entry);
            out.push('\n');
        }
    }
    out
}

fn grid_to_csv(grid: &Grid) -> String {
    let gutter = grid.row_var_names.len().max(1);
    let mut lines: Vec<String> = Vec::new();
    for (name, values) in &grid.col_headers {
        let mut fields: Vec<String> = vec![String::new(); gutter - 1];
        fields.push(name.clone());
        fields.extend(values.iter().cloned());
        lines.push(fields.join(","));
    }
    let n_cols = grid.col_headers.first().map_or(0, |(_, v)| v.len());
    if !grid.row_var_names.is_empty() {
        let mut fields = grid.row_var_names.clone();
        fields.extend(std::iter::repeat_n(String::new(), n_cols));
        lines.push(fields.join(","));
    }
    for (labels, row) in grid.row_labels.iter().zip(&grid.cells) {
        let mut fields: Vec<String> = if labels.is_empty() {
            vec![String::new()]
        } else {
            labels.clone()
        };
        fields.extend(row.iter().cloned());
        lines.push(fields.join(","));
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFormat {
    Text,
    Csv,
}

fn check_text_limits(spec: &SystemSpec, format: MapFormat) -> Result<()> {
    if format == MapFormat::Text {
        let cells = spec.state_space_size();
        if spec.component_count() > TEXT_VAR_LIMIT || cells > u128::from(TEXT_CELL_LIMIT) {
            return Err(Error::MapTooLarge {
                cells,
                limit: TEXT_CELL_LIMIT,
            });
        }
    }
    Ok(())
}

fn finish(grid: &Grid, format: MapFormat) -> String {
    match format {
        MapFormat::Text => grid_to_text(grid),
        MapFormat::Csv => grid_to_csv(grid),
    }
}

/// The structure-function map: one level digit per cell.
pub fn render_structure_map(
    spec: &SystemSpec,
    layout: &MapLayout,
    format: MapFormat,
    cap: StateCap,
) -> Result<String> {
    spec.ensure_within_cap(cap)?;
    layout.validate(spec)?;
    check_text_limits(spec, format)?;
    let grid = build_grid(
        spec,
        layout,
        |x| spec.evaluate(x).expect("lattice state").to_string(),
        Vec::new(),
    );
    Ok(finish(&grid, format))
}

/// The weighted-sum map variant.
pub fn render_sum_map(
    spec: &SystemSpec,
    layout: &MapLayout,
    format: MapFormat,
    cap: StateCap,
) -> Result<String> {
    spec.ensure_within_cap(cap)?;
    layout.validate(spec)?;
    check_text_limits(spec, format)?;
    let grid = build_grid(
        spec,
        layout,
        |x| format_ratio(&spec.weighted_sum(x).expect("lattice state")),
        Vec::new(),
    );
    Ok(finish(&grid, format))
}

fn cover_marker(i: usize) -> Option<char> {
    const MARKERS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    MARKERS.get(i).map(|&b| b as char)
}

/// A per-level binary map: `1` where the level predicate holds, blank
/// elsewhere. Success at level `j` shows `S >= j`; failure at level `j`
/// shows `S <= j - 1`. Overlays mark boundary vectors with `*` and
/// disjoint-cover terms with per-term letters, listed in a legend.
pub fn render_level_map(
    spec: &SystemSpec,
    layout: &MapLayout,
    level: u32,
    perspective: Perspective,
    overlays: LevelOverlays,
    format: MapFormat,
    cap: StateCap,
) -> Result<String> {
    spec.ensure_within_cap(cap)?;
    layout.validate(spec)?;
    check_text_limits(spec, format)?;
    spec.check_level(level)?;
    if perspective == Perspective::Failure && level == 0 {
        return Err(Error::LevelOutOfRange {
            level,
            min: 1,
            max: spec.top_level(),
        });
    }

    let mut legend = Vec::new();

    let boundary: Option<Vec<StateVector>> = if overlays.boundary {
        let set = match perspective {
            Perspective::Success => {
                if level == 0 {
                    return Err(Error::InvalidArgument(
                        "success at level 0 has no minimal upper vectors".into(),
                    ));
                }
                enumerate_muvs(spec, level, cap)?
            }
            Perspective::Failure => enumerate_mlvs(spec, level - 1, cap)?,
        };
        legend.push(format!(
            "* = {} cell, level {} ({} vectors)",
            set.kind,
            set.level,
            set.len()
        ));
        Some(set.vectors)
    } else {
        None
    };

    let cover: Option<Vec<ProductTerm>> = match overlays.cover {
        Some(method) => {
            let pre = pre_for(spec, level, perspective, method, cap)?;
            let terms = pre.expression.terms.clone();
            if terms.len() > 52 {
                return Err(Error::InvalidArgument(format!(
                    "cover overlay supports at most 52 terms, got {}",
                    terms.len()
                )));
            }
            for (i, term) in terms.iter().enumerate() {
                legend.push(format!(
                    "{} = {} ({} cells)",
                    cover_marker(i).expect("term count checked"),
                    term.render(spec, LiteralStyle::Explicit),
                    term.cell_count(spec)
                ));
            }
            Some(terms)
        }
        None => None,
    };

    let predicate = |x: &StateVector| -> bool {
        let l = spec.evaluate(x).expect("lattice state");
        match perspective {
            Perspective::Success => l >= level,
            Perspective::Failure => l < level,
        }
    };

    let grid = build_grid(
        spec,
        layout,
        |x| {
            if !predicate(x) {
                return String::new();
            }
            let mut token = match &cover {
                Some(terms) => terms
                    .iter()
                    .enumerate()
                    .find(|(_, t)| t.covers(x))
                    .and_then(|(i, _)| cover_marker(i))
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "1".to_string()),
                None => "1".to_string(),
            };
            if let Some(vectors) = &boundary {
                if vectors.contains(x) {
                    token.push('*');
                }
            }
            token
        },
        legend,
    );
    Ok(finish(&grid, format))
}
