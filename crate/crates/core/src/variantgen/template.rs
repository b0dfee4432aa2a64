use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{VariantGenError, SENTENCE_SLOT_PREFIX, SENTENCE_SLOT_SUFFIX};
use crate::corpus::VariantStyle;
use crate::providers::mock::wrap_new_sentence;
use crate::providers::ChatMessage;

const BUNDLED_PROMPTS: &str = include_str!("../../assets/prompts.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exemplar {
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StylePrompt {
    pub style_requirement: String,
    pub rules: Vec<String>,
    pub exemplars: Vec<Exemplar>,
    /// True when the texts were written for this toolkit rather than taken
    /// from a published prompt.
    #[serde(default)]
    pub reconstructed: bool,
}

/// The structured rephrasing prompt: role and task, a per-style requirement,
/// four rules, three exemplars per style, and a format instruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptTemplate {
    #[serde(default)]
    pub version: String,
    pub role_task: String,
    pub format_instruction: String,
    pub syntax: StylePrompt,
    pub voice: StylePrompt,
    pub modifier: StylePrompt,
    pub accent: StylePrompt,
    pub tone: StylePrompt,
}

impl PromptTemplate {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_PROMPTS).expect("bundled prompt asset is valid")
    }

    pub fn from_json(json: &str) -> Result<Self, VariantGenError> {
        let t: PromptTemplate = serde_json::from_str(json).map_err(|e| VariantGenError::Asset(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, VariantGenError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| VariantGenError::Asset(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn style(&self, style: VariantStyle) -> Option<&StylePrompt> {
        match style {
            VariantStyle::Original => None,
            VariantStyle::Syntax => Some(&self.syntax),
            VariantStyle::Voice => Some(&self.voice),
            VariantStyle::Modifier => Some(&self.modifier),
            VariantStyle::Accent => Some(&self.accent),
            VariantStyle::Tone => Some(&self.tone),
        }
    }

    pub fn validate(&self) -> Result<(), VariantGenError> {
        for style in VariantStyle::VARIANTS {
            let p = self.style(style).expect("variant style has a prompt");
            let bad = |m: &str| Err(VariantGenError::Asset(format!("{style}: {m}")));
            if p.rules.len() != 4 {
                return bad("exactly 4 rules required");
            }
            if p.exemplars.len() != 3 {
                return bad("exactly 3 exemplars required");
            }
            if !p.rules.iter().any(|r| r.contains("JSON") && r.contains("\"new_sentence\"")) {
                return bad("one rule must require JSON output with the key \"new_sentence\"");
            }
            if p.exemplars.iter().any(|e| e.source.trim().is_empty() || e.target.trim().is_empty()) {
                return bad("exemplar texts must be nonempty");
            }
        }
        Ok(())
    }
}

/// The system message for `style`.
pub fn render_system(style: &StylePrompt, template: &PromptTemplate) -> String {
    let mut s = String::new();
    s.push_str("[Role and Task]\n");
    s.push_str(&format!("{} [Style Requirement: {}]\n\n", template.role_task, style.style_requirement));
    s.push_str("[Rules]\n");
    for (i, rule) in style.rules.iter().enumerate() {
        s.push_str(&format!("{}. {rule}\n", i + 1));
    }
    s.push_str("\n[Example]\n");
    for (i, ex) in style.exemplars.iter().enumerate() {
        s.push_str(&format!(
            "#example {}\nsentence: {}\nreturn answer: {}\n\n",
            i + 1,
            ex.source,
            wrap_new_sentence(&ex.target)
        ));
    }
    s.push_str("[Detail Format Instruction]\n");
    s.push_str(&template.format_instruction);
    s.push_str("\n\n#Begin Task");
    s
}

/// Renders the rephrasing prompt for one sentence: a system message with the
/// protocol and a user message `The sentence: <...>`.
pub fn render_prompt(style: VariantStyle, sentence: &str, template: &PromptTemplate) -> Result<Vec<ChatMessage>, VariantGenError> {
    let prompt = template.style(style).ok_or(VariantGenError::OriginalStyle)?;
    Ok(vec![
        ChatMessage::system(render_system(prompt, template)),
        ChatMessage::user(format!("{SENTENCE_SLOT_PREFIX}{sentence}{SENTENCE_SLOT_SUFFIX}")),
    ])
}
