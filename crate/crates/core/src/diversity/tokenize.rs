//! The toolkit tokenizer.
//!
//! Lowercases, splits on whitespace, and emits every punctuation or symbol
//! character as its own token. An apostrophe or hyphen that sits between two
//! alphanumeric characters stays inside the word ("don't", "dark-blue").
//! Edit distances and syntax signatures depend on this exact behavior, so it
//! is frozen.

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

/// Splits `text` into lowercase tokens, punctuation included.
pub fn tokenize(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    let chars: Vec<char> = lowered.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        let joins = is_joiner(c) && !current.is_empty() && chars.get(i + 1).is_some_and(|n| is_word_char(*n));
        if is_word_char(c) || joins {
            current.push(c);
        } else {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            if !c.is_whitespace() {
                tokens.push(c.to_string());
            }
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// True when the token is a single punctuation or symbol character.
pub fn is_punct_token(token: &str) -> bool {
    let mut chars = token.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if !is_word_char(c))
}

/// Tokens with punctuation removed. This is the word sequence used for edit
/// distance, static embeddings and corpus statistics.
pub fn word_tokens(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| !is_punct_token(t))
        .collect()
}
