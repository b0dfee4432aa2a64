use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tokenize::is_punct_token;
use super::DiversityError;

/// The 12-tag universal part-of-speech set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Det,
    Adp,
    Pron,
    Num,
    Conj,
    Prt,
    Punct,
    X,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Pron,
        PosTag::Num,
        PosTag::Conj,
        PosTag::Prt,
        PosTag::Punct,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Pron => "PRON",
            PosTag::Num => "NUM",
            PosTag::Conj => "CONJ",
            PosTag::Prt => "PRT",
            PosTag::Punct => "PUNCT",
            PosTag::X => "X",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = DiversityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| DiversityError::Asset(format!("unknown tag `{s}`")))
    }
}

/// One tag per token.
pub type TagSequence = Vec<PosTag>;

/// Anything that assigns one universal tag per token.
pub trait Tagger: Send + Sync {
    fn tag(&self, tokens: &[String]) -> TagSequence;
}

#[derive(Deserialize)]
struct TaggerAsset {
    #[serde(default)]
    version: String,
    lexicon: HashMap<String, PosTag>,
    suffix_rules: Vec<(String, PosTag)>,
}

const BUNDLED_ASSET: &str = include_str!("../../assets/tagger.json");

/// Lexicon lookup with ordered suffix rules for unknown words.
///
/// Resolution order: punctuation, numerals, lexicon, first matching suffix
/// rule (the word must be longer than the suffix), then `X`.
#[derive(Debug, Clone)]
pub struct LexiconTagger {
    version: String,
    lexicon: HashMap<String, PosTag>,
    suffix_rules: Vec<(String, PosTag)>,
}

impl LexiconTagger {
    /// The tagger built from the asset compiled into the crate.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_ASSET).expect("bundled tagger asset is valid")
    }

    pub fn from_json(json: &str) -> Result<Self, DiversityError> {
        let asset: TaggerAsset = serde_json::from_str(json).map_err(|e| DiversityError::Asset(e.to_string()))?;
        Ok(Self { version: asset.version, lexicon: asset.lexicon, suffix_rules: asset.suffix_rules })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, DiversityError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| DiversityError::Asset(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn lexicon_len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn suffix_rules(&self) -> &[(String, PosTag)] {
        &self.suffix_rules
    }

    pub fn lookup(&self, word: &str) -> Option<PosTag> {
        self.lexicon.get(word).copied()
    }

    pub fn tag_word(&self, word: &str) -> PosTag {
        if is_punct_token(word) {
            return PosTag::Punct;
        }
        if looks_numeric(word) {
            return PosTag::Num;
        }
        let lower = word.to_lowercase();
        if let Some(tag) = self.lexicon.get(&lower) {
            return *tag;
        }
        self.suffix_rules
            .iter()
            .find(|(suffix, _)| lower.len() > suffix.len() && lower.ends_with(suffix.as_str()))
            .map(|(_, tag)| *tag)
            .unwrap_or(PosTag::X)
    }
}

fn looks_numeric(word: &str) -> bool {
    let mut digits = 0;
    for c in word.chars() {
        if c.is_ascii_digit() {
            digits += 1;
        } else if !matches!(c, '.' | ',' | '-') {
            return false;
        }
    }
    digits > 0
}

impl Tagger for LexiconTagger {
    fn tag(&self, tokens: &[String]) -> TagSequence {
        tokens.iter().map(|t| self.tag_word(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn lexicon_entries() {
        let t = LexiconTagger::bundled();
        assert!(t.lexicon_len() > 4000);
        assert_eq!(t.tag(&toks(&["the", "chair"])), vec![PosTag::Det, PosTag::Noun]);
    }

    #[test]
    fn ly_suffix_is_adverb() {
        let t = LexiconTagger::bundled();
        assert!(t.suffix_rules().iter().any(|(s, tag)| s == "ly" && *tag == PosTag::Adv));
        assert_eq!(t.tag(&toks(&["quickly"])), vec![PosTag::Adv]);
        // not in the lexicon, so only the suffix rule can tag it
        assert_eq!(t.lookup("flumpily"), None);
        assert_eq!(t.tag_word("flumpily"), PosTag::Adv);
    }

    #[test]
    fn fallbacks() {
        let t = LexiconTagger::bundled();
        assert_eq!(t.tag_word(","), PosTag::Punct);
        assert_eq!(t.tag_word("42"), PosTag::Num);
        assert_eq!(t.tag_word("3.5"), PosTag::Num);
        assert_eq!(t.tag_word("zzqx"), PosTag::X);
    }

    #[test]
    fn one_tag_per_token() {
        let t = LexiconTagger::bundled();
        let tokens = crate::diversity::tokenize("Hey mate, could you find the small lamp?? It's by 2 chairs.");
        assert_eq!(t.tag(&tokens).len(), tokens.len());
    }
}
