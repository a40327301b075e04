//! Cusp counts of the Weierstrass curves `W_D(2g−2)` for `g = 2, 3, 4` and
//! the degree of square-tiled eigenforms.
//!
//! Three-cylinder cusps are counted by prototypes: `|P_D|` in genus 2,
//! `2|P_D| + |P'_D|` in genus 3 (each model-A prototype gives an A+ and an
//! A− cusp) and `|P̃_D| + |P̃'_D|` in genus 4. For square `D` genus 3 adds
//! `2|P^s_D|` one- and two-cylinder cusps. The corresponding genus-2 and
//! genus-4 summands have no closed formula here; they are carried as
//! reference values only.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{PrymError, Result};
use crate::exactnum::{exact_sqrt, rational_lattice_hnf, QuadNum};
use crate::prototypes::{enumerate, enumerate_genus2, enumerate_square_cusp, CompletePrototype, Model};

/// The extra summand for square discriminants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareExtra {
    Computed(usize),
    NotComputed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspReport {
    pub disc: i64,
    pub genus: u8,
    /// Cusps from model A± and B decompositions.
    pub three_cyl_count: usize,
    /// `None` unless `D` is a perfect square.
    pub square_extra: Option<SquareExtra>,
    pub total: Option<usize>,
}

pub fn cusp_count(disc: i64, genus: u8) -> CuspReport {
    let square = exact_sqrt(disc).filter(|_| disc > 0);
    let three_cyl_count = match genus {
        2 => enumerate_genus2(disc).len(),
        3 => 2 * enumerate(disc, 3, Model::A).len() + enumerate(disc, 3, Model::B).len(),
        _ => enumerate(disc, 4, Model::A).len() + enumerate(disc, 4, Model::B).len(),
    };
    let square_extra = square.map(|d| {
        if genus == 3 {
            SquareExtra::Computed(2 * enumerate_square_cusp(d).len())
        } else {
            SquareExtra::NotComputed
        }
    });
    let total = match square_extra {
        None => Some(three_cyl_count),
        Some(SquareExtra::Computed(n)) => Some(three_cyl_count + n),
        Some(SquareExtra::NotComputed) => None,
    };
    CuspReport {
        disc,
        genus,
        three_cyl_count,
        square_extra,
        total,
    }
}

/// Genus-2 and genus-4 extra summands of the published table for square
/// `D ≤ 52`, as `(D, genus 2, genus 4)`.
pub const REFERENCE_SQUARE_EXTRAS: [(i64, usize, usize); 5] =
    [(9, 1, 0), (16, 1, 1), (25, 2, 3), (36, 3, 5), (49, 5, 9)];

fn reference_extra(disc: i64, genus: u8) -> Option<usize> {
    REFERENCE_SQUARE_EXTRAS
        .iter()
        .find(|r| r.0 == disc)
        .map(|r| if genus == 2 { r.1 } else { r.2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub disc: i64,
    pub g2: CuspReport,
    pub g3: CuspReport,
    pub g4: CuspReport,
    /// Reference-only genus-2 and genus-4 extras, when tabulated.
    pub g2_reference_extra: Option<usize>,
    pub g4_reference_extra: Option<usize>,
}

#[derive(Serialize)]
struct CsvRow {
    #[serde(rename = "D")]
    disc: i64,
    g2_model: usize,
    g2_extra: String,
    g3_model: usize,
    g3_extra: String,
    g4_model: usize,
    g4_extra: String,
    g3_total: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = PrymError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            "json" => Ok(TableFormat::Json),
            _ => Err(PrymError::Parse(format!(
                "unknown format {s:?}, expected csv, md or json"
            ))),
        }
    }
}

/// Rows for every discriminant (`D ≡ 0, 1 mod 4`, `D ≥ 5`) in `range`.
pub fn table1_rows(range: RangeInclusive<i64>) -> Vec<Table1Row> {
    range
        .filter(|&d| d >= 5 && matches!(d.rem_euclid(4), 0 | 1))
        .map(|d| Table1Row {
            disc: d,
            g2: cusp_count(d, 2),
            g3: cusp_count(d, 3),
            g4: cusp_count(d, 4),
            g2_reference_extra: reference_extra(d, 2),
            g4_reference_extra: reference_extra(d, 4),
        })
        .collect()
}

fn extra_cell(extra: Option<SquareExtra>, reference: Option<usize>) -> String {
    match (extra, reference) {
        (Some(SquareExtra::Computed(n)), _) => n.to_string(),
        (Some(SquareExtra::NotComputed), Some(r)) => format!("ref:{r}"),
        _ => String::new(),
    }
}

/// The cusp table in the requested format. In CSV, tabulated extras that
/// are not computed appear as `ref:N`.
pub fn emit_table1(range: RangeInclusive<i64>, format: TableFormat) -> Result<String> {
    let rows = table1_rows(range);
    match format {
        TableFormat::Json => serde_json::to_string_pretty(&rows)
            .map(|s| s + "\n")
            .map_err(|e| PrymError::Consistency(e.to_string())),
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(CsvRow {
                    disc: r.disc,
                    g2_model: r.g2.three_cyl_count,
                    g2_extra: extra_cell(r.g2.square_extra, r.g2_reference_extra),
                    g3_model: r.g3.three_cyl_count,
                    g3_extra: extra_cell(r.g3.square_extra, None),
                    g4_model: r.g4.three_cyl_count,
                    g4_extra: extra_cell(r.g4.square_extra, r.g4_reference_extra),
                    g3_total: r.g3.total.unwrap_or(0),
                })
                .map_err(|e| PrymError::Consistency(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| PrymError::Consistency(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| PrymError::Consistency(e.to_string()))
        }
        TableFormat::Markdown => {
            let mut s = String::from("| D | genus 2 | genus 3 | genus 4 |\n|---:|---:|---:|---:|\n");
            let cell = |c: &CuspReport, reference: Option<usize>| match (c.square_extra, reference) {
                (Some(SquareExtra::Computed(n)), _) => format!("**{}+{}**", c.three_cyl_count, n),
                (Some(SquareExtra::NotComputed), Some(r)) => format!("**{}+{}**†", c.three_cyl_count, r),
                (Some(SquareExtra::NotComputed), None) => format!("**{}+?**", c.three_cyl_count),
                (None, _) => c.three_cyl_count.to_string(),
            };
            for r in &rows {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    r.disc,
                    cell(&r.g2, r.g2_reference_extra),
                    cell(&r.g3, None),
                    cell(&r.g4, r.g4_reference_extra)
                );
            }
            s.push_str("\n† reference value, not computed\n");
            Ok(s)
        }
    }
}

/// Number of unit squares of the primitive square-tiled surface in the
/// orbit of a model-A± surface with `D = d²`: its area over the covolume of
/// its period lattice.
pub fn square_tiled_degree(cp: &CompletePrototype) -> Result<i64> {
    let p = &cp.proto;
    let d = exact_sqrt(p.disc).ok_or(PrymError::NonSquare(p.disc))?;
    let lam = p.lambda();
    debug_assert!(lam.is_rational());
    let lam = lam.rational_part().clone();
    let int = |n: i64| BigRational::from_integer(n.into());
    let side = if cp.eps > 0 { lam.clone() } else { &lam / int(2) };
    let gens = [
        (side.clone(), BigRational::zero()),
        (BigRational::zero(), side),
        (int(p.w), BigRational::zero()),
        (int(p.t), int(p.h)),
    ];
    let (a, _, c) = rational_lattice_hnf(&gens)?;
    let area = if cp.eps > 0 {
        &lam * int(d)
    } else {
        &lam * int(d) / int(2)
    };
    let n = area / (a * c);
    let n = QuadNum::new(n, BigRational::zero(), p.disc as u64)
        .to_i64()
        .ok_or_else(|| PrymError::Consistency(format!("{cp}: non-integral square count")))?;
    if n != d && n != 2 * d {
        return Err(PrymError::Consistency(format!(
            "{cp}: {n} squares, expected {d} or {}",
            2 * d
        )));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prototypes::{enumerate_complete, Prototype};

    #[test]
    fn counts() {
        assert_eq!(cusp_count(17, 3).total, Some(6));
        let r = cusp_count(49, 3);
        assert_eq!(
            (r.three_cyl_count, r.square_extra),
            (10, Some(SquareExtra::Computed(6)))
        );
        assert_eq!(cusp_count(8, 4).total, Some(2));
        let g2 = cusp_count(25, 2);
        assert_eq!(
            (g2.three_cyl_count, g2.square_extra, g2.total),
            (6, Some(SquareExtra::NotComputed), None)
        );
        assert_eq!(cusp_count(12, 3).total, Some(2));
        for d in [5, 13, 21, 29, 37, 45] {
            assert_eq!(cusp_count(d, 3).total, Some(0));
        }
    }

    #[test]
    fn degrees() {
        let cp = |w, h, t, e, eps| CompletePrototype {
            proto: Prototype::a3(w, h, t, e).unwrap(),
            eps,
        };
        assert_eq!(square_tiled_degree(&cp(12, 1, 0, -2, 1)).unwrap(), 10);
        assert_eq!(square_tiled_degree(&cp(3, 1, 0, -1, 1)).unwrap(), 10);
        assert_eq!(square_tiled_degree(&cp(3, 1, 0, -1, -1)).unwrap(), 5);
        for c in enumerate_complete(36) {
            assert_eq!(square_tiled_degree(&c).unwrap(), 6, "{c}");
        }
        assert_eq!(square_tiled_degree(&cp(2, 1, 0, -1, 1)), Err(PrymError::NonSquare(17)));
    }

    #[test]
    fn table_formats() {
        let csv = emit_table1(5..=12, TableFormat::Csv).unwrap();
        assert_eq!(
            csv,
            "D,g2_model,g2_extra,g3_model,g3_extra,g4_model,g4_extra,g3_total\n\
             5,1,,0,,1,,0\n8,2,,1,,2,,1\n9,1,ref:1,0,0,0,ref:0,0\n12,3,,2,,3,,2\n"
        );
        let md = emit_table1(9..=9, TableFormat::Markdown).unwrap();
        assert!(md.contains("| 9 | **1+1**† | **0+0** | **0+0**† |"));
        assert!(emit_table1(5..=8, TableFormat::Json)
            .unwrap()
            .contains("\"three_cyl_count\""));
    }
}
