use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{term_key, AspectTerm};
use crate::error::{Error, Result};

/// A manual grouping of aspect terms that name the same concept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectCategory {
    pub category_id: String,
    pub label: String,
    pub members: Vec<Vec<String>>,
}

impl AspectCategory {
    pub fn member_keys(&self) -> impl Iterator<Item = String> + '_ {
        self.members.iter().map(|m| term_key(m))
    }
}

/// Warnings from [`check_categories`]. Neither list stops the pipeline.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCheck {
    /// Category members that are not among the mined terms.
    pub unknown_members: Vec<String>,
    /// Mined terms that no category lists.
    pub uncategorized: Vec<String>,
}

impl CategoryCheck {
    pub fn is_clean(&self) -> bool {
        self.unknown_members.is_empty() && self.uncategorized.is_empty()
    }
}

/// Validates a category list against the mined vocabulary.
///
/// Fails on a repeated category id, an empty category, or a term listed in
/// two categories.
pub fn check_categories(categories: &[AspectCategory], mined: &[AspectTerm]) -> Result<CategoryCheck> {
    let mut ids = BTreeSet::new();
    let mut owner: BTreeMap<String, &str> = BTreeMap::new();
    for cat in categories {
        if !ids.insert(cat.category_id.as_str()) {
            return Err(Error::DuplicateCategoryId(cat.category_id.clone()));
        }
        if cat.members.is_empty() || cat.members.iter().any(Vec::is_empty) {
            return Err(Error::EmptyCategory(cat.category_id.clone()));
        }
        for key in cat.member_keys() {
            if let Some(first) = owner.get(&key) {
                return Err(Error::DuplicateCategoryMember {
                    member: key,
                    first: String::from(*first),
                    second: cat.category_id.clone(),
                });
            }
            owner.insert(key, &cat.category_id);
        }
    }

    let mined_keys: BTreeSet<String> = mined.iter().map(AspectTerm::key).collect();
    Ok(CategoryCheck {
        unknown_members: owner
            .keys()
            .filter(|k| !mined_keys.contains(*k))
            .cloned()
            .collect(),
        uncategorized: mined_keys
            .into_iter()
            .filter(|k| !owner.contains_key(k))
            .collect(),
    })
}
