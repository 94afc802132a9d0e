//! Grid-world model generator.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use serde_json::Number;

use crate::model::{cost_to_json, parse_decimal, Cost, ModelDoc, StateDoc, TransitionDoc};

type Cell = [usize; 2];

/// Rectangular workspace. Cells are named `r{row}c{col}`; free cells are
/// joined to their four neighbours in both directions.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(default)]
    pub obstacles: Vec<Cell>,
    /// Output of every cell not covered by `outputs`.
    #[serde(default = "default_output")]
    pub default_output: String,
    #[serde(default)]
    pub outputs: Vec<OutputClass>,
    #[serde(default)]
    pub labels: Vec<CellLabel>,
    pub initial: Vec<Cell>,
    #[serde(default)]
    pub secret: Vec<Cell>,
    #[serde(default = "one")]
    pub move_cost: Number,
    /// Per-direction overrides of `move_cost`.
    #[serde(default)]
    pub edge_costs: Vec<EdgeCost>,
}

fn default_output() -> String {
    "free".into()
}

fn one() -> Number {
    Number::from(1)
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputClass {
    pub cells: Vec<Cell>,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellLabel {
    pub cell: Cell,
    pub props: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeCost {
    pub from: Cell,
    pub to: Cell,
    pub cost: Number,
}

pub fn cell_name([r, c]: Cell) -> String {
    format!("r{r}c{c}")
}

impl GridSpec {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            format!("invalid grid spec at {path}: {}", e.into_inner())
        })
    }

    fn check_cell(&self, cell: Cell, what: &str) -> Result<(), String> {
        if cell[0] >= self.rows || cell[1] >= self.cols {
            return Err(format!(
                "{what} cell {cell:?} lies outside the {}x{} grid",
                self.rows, self.cols
            ));
        }
        Ok(())
    }

    fn cost(text: &Number, what: &str) -> Result<Cost, String> {
        match parse_decimal(&text.to_string()) {
            Some(c) if c > Cost::from(0) => Ok(c),
            _ => Err(format!("{what} must be a positive decimal, got {text}")),
        }
    }

    /// Builds the model document, checking the spec's invariants.
    pub fn to_model(&self) -> Result<ModelDoc, String> {
        if self.rows == 0 || self.cols == 0 {
            return Err("rows and cols must be positive".into());
        }
        let mut blocked = BTreeSet::new();
        for &c in &self.obstacles {
            self.check_cell(c, "obstacle")?;
            blocked.insert(c);
        }
        let free = |c: Cell| !blocked.contains(&c);
        let initial: BTreeSet<Cell> = self.initial.iter().copied().collect();
        for &c in &self.initial {
            self.check_cell(c, "initial")?;
            if !free(c) {
                return Err(format!("initial cell {c:?} is an obstacle"));
            }
        }
        for &c in &self.secret {
            self.check_cell(c, "secret")?;
            if !initial.contains(&c) {
                return Err(format!("secret cell {c:?} is not initial"));
            }
        }

        let mut output: BTreeMap<Cell, &str> = BTreeMap::new();
        for class in &self.outputs {
            for &c in &class.cells {
                self.check_cell(c, "output")?;
                if output.insert(c, &class.output).is_some() {
                    return Err(format!("cell {c:?} is assigned two outputs"));
                }
            }
        }
        let mut labels: BTreeMap<Cell, BTreeSet<String>> = BTreeMap::new();
        for l in &self.labels {
            self.check_cell(l.cell, "label")?;
            if !free(l.cell) {
                return Err(format!("label on obstacle cell {:?}", l.cell));
            }
            labels
                .entry(l.cell)
                .or_default()
                .extend(l.props.iter().cloned());
        }

        let step = Self::cost(&self.move_cost, "move_cost")?;
        let mut overrides: BTreeMap<(Cell, Cell), Cost> = BTreeMap::new();
        for e in &self.edge_costs {
            self.check_cell(e.from, "edge_costs")?;
            self.check_cell(e.to, "edge_costs")?;
            let adjacent = e.from[0].abs_diff(e.to[0]) + e.from[1].abs_diff(e.to[1]) == 1;
            if !adjacent || !free(e.from) || !free(e.to) {
                return Err(format!(
                    "edge_costs entry {:?} -> {:?} is not a move between free neighbours",
                    e.from, e.to
                ));
            }
            overrides.insert((e.from, e.to), Self::cost(&e.cost, "edge cost")?);
        }

        let cells: Vec<Cell> = (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| [r, c]))
            .filter(|&c| free(c))
            .collect();
        let states = cells
            .iter()
            .map(|&c| StateDoc {
                name: cell_name(c),
                label: labels
                    .get(&c)
                    .map(|s| s.iter().cloned().collect())
                    .unwrap_or_default(),
                output: output
                    .get(&c)
                    .copied()
                    .unwrap_or(&self.default_output)
                    .to_string(),
            })
            .collect();
        let mut transitions = Vec::new();
        for &[r, c] in &cells {
            let mut next = Vec::new();
            if r > 0 {
                next.push([r - 1, c]);
            }
            if c > 0 {
                next.push([r, c - 1]);
            }
            if c + 1 < self.cols {
                next.push([r, c + 1]);
            }
            if r + 1 < self.rows {
                next.push([r + 1, c]);
            }
            for n in next.into_iter().filter(|&n| free(n)) {
                let w = overrides.get(&([r, c], n)).copied().unwrap_or(step);
                transitions.push(TransitionDoc {
                    from: cell_name([r, c]),
                    to: cell_name(n),
                    weight: cost_to_json(w),
                });
            }
        }
        let sorted_names = |cs: &[Cell]| -> Vec<String> {
            let set: BTreeSet<Cell> = cs.iter().copied().collect();
            set.into_iter().map(cell_name).collect()
        };
        Ok(ModelDoc {
            states,
            initial: sorted_names(&self.initial),
            secret: sorted_names(&self.secret),
            transitions,
            bidirectional: None,
        })
    }
}
