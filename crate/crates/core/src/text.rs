//! Tokenization shared by augmentation and the baseline scorer.
//!
//! A token is a maximal run of alphanumeric characters. Everything between
//! tokens is a separator and is carried through untouched.

/// Lowercased alphanumeric tokens in order of appearance.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Segment<'a> {
    Word(&'a str),
    Separator(&'a str),
}

/// Splits `text` into alternating word and separator slices that concatenate
/// back to the original string.
pub(crate) fn segments(text: &str) -> Vec<Segment<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut in_word: Option<bool> = None;
    for (i, c) in text.char_indices() {
        let is_word = c.is_alphanumeric();
        match in_word {
            Some(prev) if prev != is_word => {
                out.push(segment(&text[start..i], prev));
                start = i;
            }
            _ => {}
        }
        in_word = Some(is_word);
    }
    if let Some(prev) = in_word {
        out.push(segment(&text[start..], prev));
    }
    out
}

fn segment(s: &str, word: bool) -> Segment<'_> {
    if word {
        Segment::Word(s)
    } else {
        Segment::Separator(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_lowercases_and_splits_punctuation() {
        assert_eq!(tokenize("Senior Rust-dev, 5yrs!"), ["senior", "rust", "dev", "5yrs"]);
        assert!(tokenize("  ,;  ").is_empty());
    }

    #[test]
    fn segments_reassemble() {
        let text = "Hello, world -- again.";
        let joined: String = segments(text)
            .into_iter()
            .map(|s| match s {
                Segment::Word(w) | Segment::Separator(w) => w,
            })
            .collect();
        assert_eq!(joined, text);
        let words = segments(text)
            .into_iter()
            .filter(|s| matches!(s, Segment::Word(_)))
            .count();
        assert_eq!(words, 3);
    }
}
