//! Kano buckets and majority-vote bucketization of aspect categories.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

/// The five Kano quality classes. Declaration order is the report order and
/// the tie-break priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KanoBucket {
    MustHave,
    OneDimensional,
    Delighter,
    Indifferent,
    Reverse,
}

impl KanoBucket {
    pub const ALL: [KanoBucket; 5] = [
        KanoBucket::MustHave,
        KanoBucket::OneDimensional,
        KanoBucket::Delighter,
        KanoBucket::Indifferent,
        KanoBucket::Reverse,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Wire name, as used in `votes.csv` and the JSON API.
    pub fn as_str(self) -> &'static str {
        match self {
            KanoBucket::MustHave => "must_have",
            KanoBucket::OneDimensional => "one_dimensional",
            KanoBucket::Delighter => "delighter",
            KanoBucket::Indifferent => "indifferent",
            KanoBucket::Reverse => "reverse",
        }
    }

    /// Section heading in reports.
    pub fn heading(self) -> &'static str {
        match self {
            KanoBucket::MustHave => "Must Haves",
            KanoBucket::OneDimensional => "One-Dimensional",
            KanoBucket::Delighter => "Delighters",
            KanoBucket::Indifferent => "Indifferent",
            KanoBucket::Reverse => "Reverse",
        }
    }

    /// One-line description shown to survey subjects.
    pub fn description(self) -> &'static str {
        match self {
            KanoBucket::MustHave => {
                "Must-have quality: taken for granted when present, causes dissatisfaction when missing"
            }
            KanoBucket::OneDimensional => {
                "One-dimensional quality: satisfaction rises and falls with how well it is done"
            }
            KanoBucket::Delighter => {
                "Attractive quality: delights when present, not missed when absent"
            }
            KanoBucket::Indifferent => "Indifferent quality: makes no difference either way",
            KanoBucket::Reverse => "Reverse quality: its presence dissatisfies some users",
        }
    }
}

impl fmt::Display for KanoBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBucket(pub String);

impl fmt::Display for UnknownBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown Kano bucket `{}`", self.0)
    }
}

impl FromStr for KanoBucket {
    type Err = UnknownBucket;

    /// Case-insensitive; spaces and hyphens count as underscores and a
    /// trailing plural `s` is ignored ("Must Haves", "Delighter").
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut norm: String = s
            .trim()
            .chars()
            .map(|c| match c {
                ' ' | '-' => '_',
                c => c.to_ascii_lowercase(),
            })
            .collect();
        if norm.ends_with('s') && norm != "must_haves" {
            norm.pop();
        }
        match norm.as_str() {
            "must_have" | "must_haves" | "must_be" | "basic" => Ok(KanoBucket::MustHave),
            "one_dimensional" | "performance" => Ok(KanoBucket::OneDimensional),
            "delighter" | "attractive" => Ok(KanoBucket::Delighter),
            "indifferent" => Ok(KanoBucket::Indifferent),
            "reverse" => Ok(KanoBucket::Reverse),
            _ => Err(UnknownBucket(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyVote {
    pub subject_id: String,
    pub category_id: String,
    pub bucket: KanoBucket,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VoteRejection {
    Duplicate,
    UnknownCategory,
}

impl fmt::Display for VoteRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VoteRejection::Duplicate => f.write_str("subject already voted on this category"),
            VoteRejection::UnknownCategory => f.write_str("unknown category"),
        }
    }
}

/// Accepted votes, at most one per (subject, category).
#[derive(Debug, Clone, Default)]
pub struct VoteBook {
    known_categories: Option<BTreeSet<String>>,
    seen: BTreeSet<(String, String)>,
    votes: Vec<SurveyVote>,
}

impl VoteBook {
    /// A book that accepts any category id.
    pub fn new() -> Self {
        Self::default()
    }

    /// A book that rejects votes for categories outside `categories`.
    pub fn for_categories<I, S>(categories: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VoteBook {
            known_categories: Some(categories.into_iter().map(Into::into).collect()),
            ..Self::default()
        }
    }

    pub fn check(&self, vote: &SurveyVote) -> Result<(), VoteRejection> {
        if let Some(known) = &self.known_categories {
            if !known.contains(&vote.category_id) {
                return Err(VoteRejection::UnknownCategory);
            }
        }
        if self
            .seen
            .contains(&(vote.subject_id.clone(), vote.category_id.clone()))
        {
            return Err(VoteRejection::Duplicate);
        }
        Ok(())
    }

    pub fn add(&mut self, vote: SurveyVote) -> Result<(), VoteRejection> {
        self.check(&vote)?;
        self.seen
            .insert((vote.subject_id.clone(), vote.category_id.clone()));
        self.votes.push(vote);
        Ok(())
    }

    pub fn votes(&self) -> &[SurveyVote] {
        &self.votes
    }

    pub fn len(&self) -> usize {
        self.votes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.votes.is_empty()
    }

    /// Majority assignment per category id, for every category that has votes.
    pub fn assignments(&self) -> BTreeMap<String, BucketAssignment> {
        assign_all(&self.votes)
    }
}

/// Vote counts indexed by [`KanoBucket::index`].
pub type Tally = [u32; 5];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketAssignment {
    pub category_id: String,
    pub bucket: KanoBucket,
    pub tally: Tally,
    pub total_votes: u32,
    /// Another bucket had the same top count; the winner came from the fixed
    /// bucket priority and wants a manual look.
    pub tied: bool,
}

/// Majority bucket from a tally. `None` when there are no votes.
///
/// Ties go to the earliest bucket in [`KanoBucket::ALL`] order.
pub fn majority_of(category_id: &str, tally: Tally) -> Option<BucketAssignment> {
    let total: u32 = tally.iter().sum();
    if total == 0 {
        return None;
    }
    let top = *tally.iter().max().expect("five buckets");
    let winner = KanoBucket::ALL
        .into_iter()
        .find(|b| tally[b.index()] == top)
        .expect("some bucket holds the max");
    let tied = tally.iter().filter(|&&c| c == top).count() > 1;
    Some(BucketAssignment {
        category_id: category_id.to_string(),
        bucket: winner,
        tally,
        total_votes: total,
        tied,
    })
}

pub fn tally<'a>(buckets: impl IntoIterator<Item = &'a KanoBucket>) -> Tally {
    let mut t = [0u32; 5];
    for b in buckets {
        t[b.index()] += 1;
    }
    t
}

/// Majority vote over the votes for one category.
pub fn majority(category_id: &str, votes: &[SurveyVote]) -> Option<BucketAssignment> {
    majority_of(
        category_id,
        tally(
            votes
                .iter()
                .filter(|v| v.category_id == category_id)
                .map(|v| &v.bucket),
        ),
    )
}

/// Majority assignment for every category that received votes.
pub fn assign_all(votes: &[SurveyVote]) -> BTreeMap<String, BucketAssignment> {
    let mut tallies: BTreeMap<&str, Tally> = BTreeMap::new();
    for v in votes {
        tallies.entry(v.category_id.as_str()).or_insert([0; 5])[v.bucket.index()] += 1;
    }
    tallies
        .into_iter()
        .filter_map(|(id, t)| majority_of(id, t).map(|a| (id.to_string(), a)))
        .collect()
}
