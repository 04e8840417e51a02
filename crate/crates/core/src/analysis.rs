//! Dataset diagnostics (relation counts per entity, description leakage)
//! and result analytics (Pearson matrices, IQR outliers).

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kg::{KnowledgeGraph, Split, Triple};
use crate::rewriter::contains_at_boundary;

pub const BUCKET_LABELS: [&str; 6] = ["1", "2", "3", "4", "5", "Over"];

/// Column of a diagnostic table: one split, or every split together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    Split(Split),
    Total,
}

impl Column {
    pub const ALL: [Column; 4] = [
        Column::Split(Split::Train),
        Column::Split(Split::Valid),
        Column::Split(Split::Test),
        Column::Total,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Column::Split(s) => s.label(),
            Column::Total => "total",
        }
    }

    fn triples(self, kg: &KnowledgeGraph) -> Vec<&[Triple]> {
        match self {
            Column::Split(s) => vec![kg.split(s)],
            Column::Total => Split::ALL.iter().map(|&s| kg.split(s)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCountColumn {
    pub column: Column,
    /// Entities incident to at least one triple of the column.
    pub entities: usize,
    /// Percentage of those entities per bucket, in [`BUCKET_LABELS`] order.
    pub percentages: [f64; 6],
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCountTable {
    pub columns: Vec<RelationCountColumn>,
}

impl RelationCountTable {
    pub fn column(&self, column: Column) -> Option<&RelationCountColumn> {
        self.columns.iter().find(|c| c.column == column)
    }

    /// Buckets as rows, columns as in the table header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("relations");
        for c in &self.columns {
            out.push('\t');
            out.push_str(c.column.label());
        }
        out.push('\n');
        for (b, label) in BUCKET_LABELS.iter().enumerate() {
            out.push_str(label);
            for c in &self.columns {
                let _ = write!(out, "\t{:.2}", c.percentages[b]);
            }
            out.push('\n');
        }
        out.push_str("entities");
        for c in &self.columns {
            let _ = write!(out, "\t{}", c.entities);
        }
        out.push('\n');
        out
    }
}

/// Buckets the number of distinct relations on triples incident to each
/// entity (either side), per split and over all splits.
pub fn relation_distribution(kg: &KnowledgeGraph) -> RelationCountTable {
    let columns = Column::ALL
        .par_iter()
        .map(|&column| {
            let mut pairs: Vec<(u32, u32)> = column
                .triples(kg)
                .iter()
                .flat_map(|ts| ts.iter())
                .flat_map(|t| [(t.head, t.relation), (t.tail, t.relation)])
                .collect();
            pairs.par_sort_unstable();
            pairs.dedup();
            let mut counts = [0usize; 6];
            let mut entities = 0;
            for group in pairs.chunk_by(|a, b| a.0 == b.0) {
                entities += 1;
                counts[group.len().min(6) - 1] += 1;
            }
            let mut percentages = [0.0; 6];
            if entities > 0 {
                for (p, c) in percentages.iter_mut().zip(counts) {
                    *p = 100.0 * c as f64 / entities as f64;
                }
            }
            RelationCountColumn {
                column,
                entities,
                percentages,
            }
        })
        .collect();
    RelationCountTable { columns }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageColumn {
    pub column: Column,
    /// (triple, direction) cases examined: twice the triple count.
    pub cases: usize,
    pub leaked: usize,
}

impl LeakageColumn {
    pub fn percentage(&self) -> f64 {
        if self.cases == 0 {
            0.0
        } else {
            100.0 * self.leaked as f64 / self.cases as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeakageTable {
    pub columns: Vec<LeakageColumn>,
}

impl LeakageTable {
    pub fn column(&self, column: Column) -> Option<&LeakageColumn> {
        self.columns.iter().find(|c| c.column == column)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("split\tcases\tleaked\tpercent\n");
        for c in &self.columns {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{:.2}",
                c.column.label(),
                c.cases,
                c.leaked,
                c.percentage()
            );
        }
        out
    }
}

/// Number of query directions of `t` whose answer's name occurs in the
/// query entity's description (0, 1 or 2).
pub fn leaked_directions(kg: &KnowledgeGraph, t: &Triple) -> usize {
    let leaks = |known: u32, answer: u32| {
        let name = &kg.entity(answer).name;
        !name.is_empty() && contains_at_boundary(kg.description(known), name)
    };
    // tail query (h, r, ?) reads h's description; head query reads t's
    leaks(t.head, t.tail) as usize + leaks(t.tail, t.head) as usize
}

/// Share of (triple, direction) cases whose answer name appears in the
/// query entity's description, using the rewriter's matching rules.
pub fn description_leakage(kg: &KnowledgeGraph) -> LeakageTable {
    let per_split: Vec<LeakageColumn> = Split::ALL
        .par_iter()
        .map(|&s| {
            let triples = kg.split(s);
            LeakageColumn {
                column: Column::Split(s),
                cases: 2 * triples.len(),
                leaked: triples.par_iter().map(|t| leaked_directions(kg, t)).sum(),
            }
        })
        .collect();
    let total = LeakageColumn {
        column: Column::Total,
        cases: per_split.iter().map(|c| c.cases).sum(),
        leaked: per_split.iter().map(|c| c.leaked).sum(),
    };
    let mut columns = per_split;
    columns.push(total);
    LeakageTable { columns }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for l in &self.labels {
            out.push('\t');
            out.push_str(l);
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.values) {
            out.push_str(l);
            for v in row {
                let _ = write!(out, "\t{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Pearson correlation of `x` and `y` (equal length, non-constant).
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

/// Symmetric matrix of pairwise Pearson correlations with a unit diagonal.
pub fn pearson_matrix(series: &[(String, Vec<f64>)]) -> Result<CorrelationMatrix> {
    let Some((_, first)) = series.first() else {
        return Err(Error::InvalidArgument("no series given".into()));
    };
    let len = first.len();
    if len < 2 {
        return Err(Error::InvalidArgument("series need at least 2 values".into()));
    }
    for (name, v) in series {
        if v.len() != len {
            return Err(Error::InvalidArgument(format!(
                "series {name:?} has {} values, expected {len}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "series {name:?} has a non-finite value"
            )));
        }
        if v.iter().all(|&x| x == v[0]) {
            return Err(Error::InvalidArgument(format!("series {name:?} has zero variance")));
        }
    }
    let k = series.len();
    let mut values = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let r = pearson(&series[i].1, &series[j].1);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: series.iter().map(|(n, _)| n.clone()).collect(),
        values,
    })
}

pub const QUARTILE_CONVENTION: &str = "linear interpolation between order statistics: Q(p) = x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)]), h = (n-1)p";

#[derive(Debug, Clone, PartialEq)]
pub struct IqrReport {
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    /// Distinct outlying values, ascending.
    pub outliers: Vec<f64>,
}

impl IqrReport {
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "quartiles\t{QUARTILE_CONVENTION}\nq1\t{}\nq3\t{}\niqr\t{}\nlower_fence\t{}\nupper_fence\t{}\n",
            self.q1, self.q3, self.iqr, self.lower_fence, self.upper_fence
        );
        for v in &self.outliers {
            let _ = writeln!(out, "outlier\t{v}");
        }
        out
    }
}

/// Quantile `p` of ascending `sorted` under [`QUARTILE_CONVENTION`].
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Values outside `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]`.
pub fn iqr_outliers(values: &[f64]) -> Result<IqrReport> {
    if values.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "IQR needs at least 4 values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - 1.5 * iqr;
    let upper_fence = q3 + 1.5 * iqr;
    let mut outliers: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|&v| v < lower_fence || v > upper_fence)
        .collect();
    outliers.dedup();
    Ok(IqrReport {
        q1,
        q3,
        iqr,
        lower_fence,
        upper_fence,
        outliers,
    })
}
