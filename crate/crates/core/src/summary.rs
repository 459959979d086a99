//! Report rows: the bucketized category table and the per-entity grid.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kano::KanoBucket;
use crate::mining::AspectCategory;
use crate::sentiment::{CorpusScores, ScorePair};

/// Per-entity scores are shown multiplied by this factor.
pub const ENTITY_DISPLAY_SCALE: f64 = 1e4;

/// Share of positive score in the total, or empty when both are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SentimentBar {
    Empty,
    Fraction(f64),
}

impl SentimentBar {
    pub fn fraction(self) -> Option<f64> {
        match self {
            SentimentBar::Empty => None,
            SentimentBar::Fraction(f) => Some(f),
        }
    }
}

pub fn bar(positive: f64, negative: f64) -> Result<SentimentBar> {
    if !(positive >= 0.0 && negative >= 0.0) {
        return Err(Error::ContractViolation(format!(
            "sentiment bar needs non-negative scores, got ({positive}, {negative})"
        )));
    }
    let total = positive + negative;
    Ok(if total == 0.0 {
        SentimentBar::Empty
    } else {
        SentimentBar::Fraction(positive / total)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// `None` for categories without a bucket yet.
    pub bucket: Option<KanoBucket>,
    pub category_id: String,
    pub label: String,
    pub positive: f64,
    pub negative: f64,
    pub bar: SentimentBar,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OverallTable {
    pub rows: Vec<SummaryRow>,
    pub warnings: Vec<String>,
}

fn row_order(a: &SummaryRow, b: &SummaryRow) -> Ordering {
    // `None` (unassigned) sorts after every bucket.
    let bucket_key = |r: &SummaryRow| r.bucket.map_or(KanoBucket::ALL.len(), KanoBucket::index);
    bucket_key(a)
        .cmp(&bucket_key(b))
        .then_with(|| b.positive.total_cmp(&a.positive))
        .then_with(|| a.category_id.cmp(&b.category_id))
}

/// Builds the bucketized overview: one row per category, grouped by bucket in
/// priority order and by descending positive score inside a bucket.
/// Categories without an assignment go to a trailing unassigned section and
/// produce a warning each.
pub fn overall_table(
    categories: &[AspectCategory],
    scores: &BTreeMap<String, ScorePair>,
    assignments: &BTreeMap<String, KanoBucket>,
) -> Result<OverallTable> {
    let mut table = OverallTable::default();
    for cat in categories {
        let score = scores.get(&cat.category_id).copied().unwrap_or_default();
        let bucket = assignments.get(&cat.category_id).copied();
        if bucket.is_none() {
            table.warnings.push(format!(
                "category `{}` has no Kano bucket; listed under Unassigned",
                cat.category_id
            ));
        }
        table.rows.push(SummaryRow {
            bucket,
            category_id: cat.category_id.clone(),
            label: cat.label.clone(),
            positive: score.positive,
            negative: score.negative,
            bar: bar(score.positive, score.negative)?,
        });
    }
    table.rows.sort_by(row_order);
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityRow {
    pub bucket: Option<KanoBucket>,
    pub category_id: String,
    pub label: String,
    /// Normalized (per-review) scores, one per entity; `None` when the entity
    /// has no reviews.
    pub cells: Vec<Option<ScorePair>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EntityTable {
    pub entities: Vec<String>,
    pub rows: Vec<EntityRow>,
}

/// Per-entity comparison grid in the row order of `overall`.
pub fn entity_table(
    overall: &OverallTable,
    categories: &[AspectCategory],
    scores: &CorpusScores,
    entities: &[String],
) -> EntityTable {
    let by_id: BTreeMap<&str, &AspectCategory> = categories
        .iter()
        .map(|c| (c.category_id.as_str(), c))
        .collect();
    let rows = overall
        .rows
        .iter()
        .filter_map(|row| {
            let cat = by_id.get(row.category_id.as_str())?;
            Some(EntityRow {
                bucket: row.bucket,
                category_id: row.category_id.clone(),
                label: row.label.clone(),
                cells: entities.iter().map(|e| scores.normalized(e, cat)).collect(),
            })
        })
        .collect();
    EntityTable {
        entities: entities.to_vec(),
        rows,
    }
}

/// A normalized cell as displayed (times [`ENTITY_DISPLAY_SCALE`]).
pub fn display_scaled(normalized: ScorePair) -> ScorePair {
    ScorePair {
        positive: normalized.positive * ENTITY_DISPLAY_SCALE,
        negative: normalized.negative * ENTITY_DISPLAY_SCALE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn frac(p: f64, n: f64) -> f64 {
        bar(p, n).unwrap().fraction().unwrap()
    }

    #[test]
    fn bar_examples() {
        assert!((frac(664.893, 224.012) - 0.75).abs() <= 0.005);
        assert!((frac(23.315, 204.577) - 0.10).abs() <= 0.005);
        assert_eq!(bar(0.0, 0.0).unwrap(), SentimentBar::Empty);
        assert_eq!(frac(3.0, 0.0), 1.0);
        assert_eq!(frac(0.0, 3.0), 0.0);
        assert!(bar(-1.0, 2.0).is_err());
        assert!(bar(f64::NAN, 2.0).is_err());
    }

    fn cat(id: &str) -> AspectCategory {
        AspectCategory {
            category_id: id.into(),
            label: id.into(),
            members: vec![vec![id.into()]],
        }
    }

    #[test]
    fn rows_grouped_and_sorted() {
        let cats = [cat("a"), cat("b"), cat("c"), cat("d")];
        let scores: BTreeMap<String, ScorePair> = [
            ("a".into(), ScorePair::new(1.0, 1.0)),
            ("b".into(), ScorePair::new(5.0, 1.0)),
            ("c".into(), ScorePair::new(9.0, 1.0)),
            ("d".into(), ScorePair::new(2.0, 0.0)),
        ]
        .into();
        let assignments: BTreeMap<String, KanoBucket> = [
            ("a".into(), KanoBucket::MustHave),
            ("b".into(), KanoBucket::MustHave),
            ("c".into(), KanoBucket::Delighter),
        ]
        .into();
        let t = overall_table(&cats, &scores, &assignments).unwrap();
        let ids: Vec<&str> = t.rows.iter().map(|r| r.category_id.as_str()).collect();
        assert_eq!(ids, ["b", "a", "c", "d"]);
        assert_eq!(t.rows[3].bucket, None);
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn empty_table() {
        let t = overall_table(&[], &BTreeMap::new(), &BTreeMap::new()).unwrap();
        assert!(t.rows.is_empty());
        assert!(t.warnings.is_empty());
    }

    #[test]
    fn display_scale() {
        let d = display_scaled(ScorePair::new(0.0293525, 0.0068054));
        assert!((d.positive - 293.525).abs() < 1e-9);
        assert!((d.negative - 68.054).abs() < 1e-9);
    }
}
