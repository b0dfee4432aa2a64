//! Shallow chunking of tag sequences into lexicon-free structure strings.
//!
//! Grammar, applied greedily left to right:
//!
//! ```text
//! NP := DET? ADJ* NOUN+  |  PRON
//! PP := ADP NP
//! VP := VERB+ (NP | PP)*
//! ```
//!
//! Tags not covered by a chunk are emitted bare, and the whole sequence is
//! wrapped in `(S ...)`.

use super::tagger::PosTag;

/// Bracketed structure string over tags and chunk labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SyntaxSignature(pub String);

impl SyntaxSignature {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Terms for vectorization: brackets are standalone terms.
    pub fn terms(&self) -> Vec<String> {
        let mut terms = Vec::new();
        let mut current = String::new();
        for c in self.0.chars() {
            match c {
                '(' | ')' => {
                    if !current.is_empty() {
                        terms.push(std::mem::take(&mut current));
                    }
                    terms.push(c.to_string());
                }
                c if c.is_whitespace() => {
                    if !current.is_empty() {
                        terms.push(std::mem::take(&mut current));
                    }
                }
                c => current.push(c),
            }
        }
        if !current.is_empty() {
            terms.push(current);
        }
        terms
    }
}

impl std::fmt::Display for SyntaxSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn parse_np(tags: &[PosTag], start: usize) -> Option<(usize, String)> {
    if tags.get(start) == Some(&PosTag::Pron) {
        return Some((start + 1, "(NP PRON)".to_string()));
    }
    let mut i = start;
    let mut parts = Vec::new();
    if tags.get(i) == Some(&PosTag::Det) {
        parts.push("DET");
        i += 1;
    }
    while tags.get(i) == Some(&PosTag::Adj) {
        parts.push("ADJ");
        i += 1;
    }
    let nouns_start = i;
    while tags.get(i) == Some(&PosTag::Noun) {
        parts.push("NOUN");
        i += 1;
    }
    if i == nouns_start {
        return None;
    }
    Some((i, format!("(NP {})", parts.join(" "))))
}

fn parse_pp(tags: &[PosTag], start: usize) -> Option<(usize, String)> {
    if tags.get(start) != Some(&PosTag::Adp) {
        return None;
    }
    let (end, np) = parse_np(tags, start + 1)?;
    Some((end, format!("(PP ADP {np})")))
}

fn parse_vp(tags: &[PosTag], start: usize) -> Option<(usize, String)> {
    let mut i = start;
    let mut parts = Vec::new();
    while tags.get(i) == Some(&PosTag::Verb) {
        parts.push("VERB".to_string());
        i += 1;
    }
    if parts.is_empty() {
        return None;
    }
    loop {
        if let Some((end, np)) = parse_np(tags, i) {
            parts.push(np);
            i = end;
        } else if let Some((end, pp)) = parse_pp(tags, i) {
            parts.push(pp);
            i = end;
        } else {
            break;
        }
    }
    Some((i, format!("(VP {})", parts.join(" "))))
}

/// Chunks a tag sequence into its structure string.
pub fn chunk_signature(tags: &[PosTag]) -> SyntaxSignature {
    let mut items = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let chunk = parse_np(tags, i)
            .or_else(|| parse_pp(tags, i))
            .or_else(|| parse_vp(tags, i));
        match chunk {
            Some((end, s)) => {
                items.push(s);
                i = end;
            }
            None => {
                items.push(tags[i].as_str().to_string());
                i += 1;
            }
        }
    }
    if items.is_empty() {
        SyntaxSignature("(S)".to_string())
    } else {
        SyntaxSignature(format!("(S {})", items.join(" ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PosTag::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(chunk_signature(&[Det, Noun]).as_str(), "(S (NP DET NOUN))");
        assert_eq!(chunk_signature(&[Det, Noun, Verb, Adj]).as_str(), "(S (NP DET NOUN) (VP VERB) ADJ)");
        assert_eq!(chunk_signature(&[]).as_str(), "(S)");
        assert_eq!(
            chunk_signature(&[Det, Adj, Noun, Verb, Det, Noun, Adp, Det, Noun]).as_str(),
            "(S (NP DET ADJ NOUN) (VP VERB (NP DET NOUN) (PP ADP (NP DET NOUN))))"
        );
        assert_eq!(chunk_signature(&[Pron, Verb, Pron]).as_str(), "(S (NP PRON) (VP VERB (NP PRON)))");
        // DET ADJ without a noun is not an NP
        assert_eq!(chunk_signature(&[Det, Adj, Punct]).as_str(), "(S DET ADJ PUNCT)");
        assert_eq!(chunk_signature(&[Adp, Verb]).as_str(), "(S ADP (VP VERB))");
    }

    #[test]
    fn signature_terms() {
        let sig = chunk_signature(&[Det, Noun]);
        assert_eq!(sig.terms(), vec!["(", "S", "(", "NP", "DET", "NOUN", ")", ")"]);
    }

    #[test]
    fn brackets_balance() {
        let tags = [Det, Noun, Adp, Adj, Noun, Verb, Verb, Adv, Pron, Conj, Num, X, Punct];
        for n in 0..tags.len() {
            let s = chunk_signature(&tags[..n]).0;
            let open = s.matches('(').count();
            let close = s.matches(')').count();
            assert_eq!(open, close, "{s}");
        }
    }
}
