//! Presentation files: the TOML surface describing (Γ, r_0, V, r_1) plus a
//! scalar context, with eager validation and canonical re-serialization.
//!
//! The root order N of the session field ℚ(ζ_N) is
//! lcm(exponent of Γ, 2, declared root_order); scalar expressions in the
//! file are parsed relative to that context, so `z` always means ζ_N.

use crate::abgroup::{Bicharacter, Character, FinAbGroup, GroupElement};
use crate::qls::{BilinearForm, QlsDatum};
use crate::scalar::{lcm, parse_expression, CyclotomicContext, Scalar};
use serde::Deserialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("TOML parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{location}: {source}")]
    Scalar {
        location: String,
        source: crate::scalar::ScalarError,
    },
    #[error("{location}: {source}")]
    Group {
        location: String,
        source: crate::abgroup::GroupError,
    },
    #[error("datum validation failed: {0}")]
    Datum(#[from] crate::qls::DatumError),
    #[error("{0}")]
    Structure(String),
}

#[derive(Debug, Deserialize)]
struct RawPresentation {
    name: Option<String>,
    description: Option<String>,
    context: Option<RawContext>,
    group: RawGroup,
    r0: RawR0,
    #[serde(default, rename = "generator")]
    generators: Vec<RawGenerator>,
    r1: Option<RawR1>,
}

#[derive(Debug, Deserialize)]
struct RawContext {
    root_order: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct RawGroup {
    invariants: Vec<u64>,
}

#[derive(Debug, Deserialize)]
struct RawR0 {
    table: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
struct RawGenerator {
    g: Vec<i64>,
    chi: Vec<i64>,
}

#[derive(Debug, Deserialize)]
struct RawR1 {
    matrix: Vec<Vec<String>>,
}

/// A fully validated presentation: the scalar context, the datum, and the
/// braiding form.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub name: String,
    pub description: String,
    pub datum: QlsDatum,
    pub r1: BilinearForm,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.description == other.description
            && self.datum == other.datum
            && self.r1 == other.r1
    }
}

impl Presentation {
    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let raw: RawPresentation = toml::from_str(text)?;
        if raw.group.invariants.iter().any(|&m| m < 2) {
            return Err(PresentationError::Structure(
                "group invariants must all be at least 2".into(),
            ));
        }
        let group = if raw.group.invariants.is_empty() {
            FinAbGroup::trivial()
        } else {
            FinAbGroup::new(raw.group.invariants.clone())
        };
        let declared = raw.context.and_then(|c| c.root_order).unwrap_or(1);
        if declared == 0 {
            return Err(PresentationError::Structure("root_order must be positive".into()));
        }
        let n_root = lcm(lcm(group.exponent(), 2), declared);
        let ctx = CyclotomicContext::new(n_root);

        // bicharacter table
        let k = group.rank();
        if raw.r0.table.len() != k || raw.r0.table.iter().any(|row| row.len() != k) {
            return Err(PresentationError::Structure(format!(
                "r0 table must be {k}x{k} to match the group invariants"
            )));
        }
        let mut table: Vec<Vec<Scalar>> = Vec::with_capacity(k);
        for (i, row) in raw.r0.table.iter().enumerate() {
            let mut out = Vec::with_capacity(k);
            for (j, cell) in row.iter().enumerate() {
                out.push(parse_expression(&ctx, cell).map_err(|source| {
                    PresentationError::Scalar {
                        location: format!("r0.table[{i}][{j}]"),
                        source,
                    }
                })?);
            }
            table.push(out);
        }
        let r0 = Bicharacter::from_scalar_table(&group, &table).map_err(|source| {
            PresentationError::Group {
                location: "r0.table".into(),
                source,
            }
        })?;

        // generators
        let mut degrees: Vec<GroupElement> = Vec::new();
        let mut characters: Vec<Character> = Vec::new();
        for (i, gen) in raw.generators.iter().enumerate() {
            degrees.push(group.element(&gen.g).map_err(|source| {
                PresentationError::Group {
                    location: format!("generator[{i}].g"),
                    source,
                }
            })?);
            characters.push(Character::new(&group, &gen.chi).map_err(|source| {
                PresentationError::Group {
                    location: format!("generator[{i}].chi"),
                    source,
                }
            })?);
        }
        let n = degrees.len();

        let datum = QlsDatum::new(ctx.clone(), group, r0, degrees, characters)?;

        // braiding form, default zero
        let r1 = match raw.r1 {
            None => BilinearForm::zero(&ctx, n),
            Some(raw_r1) => {
                if raw_r1.matrix.len() != n || raw_r1.matrix.iter().any(|row| row.len() != n) {
                    return Err(PresentationError::Structure(format!(
                        "r1 matrix must be {n}x{n} to match the generator count"
                    )));
                }
                let mut m: Vec<Vec<Scalar>> = Vec::with_capacity(n);
                for (i, row) in raw_r1.matrix.iter().enumerate() {
                    let mut out = Vec::with_capacity(n);
                    for (j, cell) in row.iter().enumerate() {
                        out.push(parse_expression(&ctx, cell).map_err(|source| {
                            PresentationError::Scalar {
                                location: format!("r1.matrix[{i}][{j}]"),
                                source,
                            }
                        })?);
                    }
                    m.push(out);
                }
                BilinearForm::new(&datum, m)?
            }
        };

        Ok(Presentation {
            name: raw.name.unwrap_or_default(),
            description: raw.description.unwrap_or_default(),
            datum,
            r1,
        })
    }

    pub fn parse_file(path: &std::path::Path) -> Result<Presentation, PresentationError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            PresentationError::Structure(format!("cannot read {}: {e}", path.display()))
        })?;
        Presentation::parse(&text)
    }

    /// Assembles a presentation from validated parts (used when emitting
    /// derived data such as Drinfeld doubles).
    pub fn from_parts(
        name: String,
        description: String,
        datum: QlsDatum,
        r1: BilinearForm,
    ) -> Presentation {
        Presentation {
            name,
            description,
            datum,
            r1,
        }
    }

    pub fn context(&self) -> &Arc<CyclotomicContext> {
        &self.datum.ctx
    }

    /// Canonical TOML serialization; reparsing yields an equal presentation.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let esc = |s: &str| s.replace('\\', "\\\\").replace('"', "\\\"");
        if !self.name.is_empty() {
            out.push_str(&format!("name = \"{}\"\n", esc(&self.name)));
        }
        if !self.description.is_empty() {
            out.push_str(&format!("description = \"{}\"\n", esc(&self.description)));
        }
        out.push_str(&format!(
            "\n[context]\nroot_order = {}\n",
            self.datum.ctx.order()
        ));
        out.push_str(&format!(
            "\n[group]\ninvariants = [{}]\n",
            self.datum
                .group
                .invariants()
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        let k = self.datum.group.rank();
        let ctx = &self.datum.ctx;
        let rows: Vec<String> = (0..k)
            .map(|i| {
                let cells: Vec<String> = (0..k)
                    .map(|j| {
                        format!(
                            "\"{}\"",
                            ctx.zeta(self.datum.r0.exps[i][j] as i64).to_expression()
                        )
                    })
                    .collect();
                format!("  [{}],", cells.join(", "))
            })
            .collect();
        out.push_str(&format!("\n[r0]\ntable = [\n{}\n]\n", rows.join("\n")));
        for (g, chi) in self.datum.degrees.iter().zip(&self.datum.characters) {
            out.push_str(&format!(
                "\n[[generator]]\ng = [{}]\nchi = [{}]\n",
                g.exps
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                chi.exps
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        let n = self.datum.dim_v();
        if n > 0 {
            let rows: Vec<String> = (0..n)
                .map(|i| {
                    let cells: Vec<String> = (0..n)
                        .map(|j| format!("\"{}\"", self.r1.value(i, j).to_expression()))
                        .collect();
                    format!("  [{}],", cells.join(", "))
                })
                .collect();
            out.push_str(&format!("\n[r1]\nmatrix = [\n{}\n]\n", rows.join("\n")));
        }
        out
    }
}
