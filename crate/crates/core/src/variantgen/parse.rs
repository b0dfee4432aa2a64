use serde_json::Value;

use super::VariantGenError;

/// Finds the first well-formed JSON object in `text`: the earliest `{` from
/// which a complete object parses. Trailing text after the object is ignored.
pub fn first_json_object(text: &str) -> Option<serde_json::Map<String, Value>> {
    for (i, _) in text.match_indices('{') {
        let mut stream = serde_json::Deserializer::from_str(&text[i..]).into_iter::<Value>();
        if let Some(Ok(Value::Object(map))) = stream.next() {
            return Some(map);
        }
    }
    None
}

/// Extracts the trimmed `"new_sentence"` value from a provider reply.
pub fn parse_response(text: &str) -> Result<String, VariantGenError> {
    let obj = first_json_object(text).ok_or(VariantGenError::NoJsonObject)?;
    let value = obj.get("new_sentence").ok_or(VariantGenError::MissingKey)?;
    let s = value.as_str().ok_or(VariantGenError::MissingKey)?.trim();
    if s.is_empty() {
        return Err(VariantGenError::EmptySentence);
    }
    Ok(s.to_string())
}
