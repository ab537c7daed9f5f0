use std::collections::HashMap;

use super::{GroupError, Letter};

type Word = Vec<(usize, bool)>;

const SUPERSCRIPT_DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

/// Parses words such as `a b^-1`, `a⁻¹ b`, `(s t)^3` or, when every letter
/// name is a single character, the compact form `abAB` is not accepted but
/// `abab` is.
pub(crate) fn parse(text: &str, names: &HashMap<String, usize>) -> Result<Word, GroupError> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let word = parse_seq(&chars, &mut pos, names, 0)?;
    if pos != chars.len() {
        return Err(GroupError::Syntax(format!("unexpected {:?} at offset {pos}", chars[pos])));
    }
    Ok(word)
}

fn parse_seq(chars: &[char], pos: &mut usize, names: &HashMap<String, usize>, depth: usize) -> Result<Word, GroupError> {
    let mut out = Vec::new();
    loop {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || matches!(chars[*pos], '*' | '·' | '.')) {
            *pos += 1;
        }
        if *pos >= chars.len() {
            if depth > 0 {
                return Err(GroupError::Syntax("unclosed parenthesis".into()));
            }
            return Ok(out);
        }
        let c = chars[*pos];
        let atom: Word = if c == '(' {
            *pos += 1;
            let inner = parse_seq(chars, pos, names, depth + 1)?;
            *pos += 1; // ')'
            inner
        } else if c == ')' {
            if depth == 0 {
                return Err(GroupError::Syntax(format!("unmatched ')' at offset {}", *pos)));
            }
            return Ok(out);
        } else if c.is_alphanumeric() || c == '_' {
            let start = *pos;
            while *pos < chars.len() && (chars[*pos].is_alphanumeric() || chars[*pos] == '_') && !SUPERSCRIPT_DIGITS.contains(&chars[*pos]) {
                *pos += 1;
            }
            let ident: String = chars[start..*pos].iter().collect();
            match names.get(&ident) {
                Some(&l) => vec![(l, false)],
                None => split_compact(&ident, names)?,
            }
        } else {
            return Err(GroupError::Syntax(format!("unexpected {c:?} at offset {}", *pos)));
        };
        let exp = parse_exponent(chars, pos)?;
        // a compact run like `ab^2` applies the exponent to the last letter only
        let (head, last) = if atom.len() > 1 && c != '(' {
            (atom[..atom.len() - 1].to_vec(), atom[atom.len() - 1..].to_vec())
        } else {
            (Vec::new(), atom)
        };
        out.extend(head);
        out.extend(power(&last, exp));
    }
}

fn split_compact(ident: &str, names: &HashMap<String, usize>) -> Result<Word, GroupError> {
    let single_char = names.keys().all(|n| n.chars().count() == 1);
    if !single_char || ident.chars().count() == 1 {
        return Err(GroupError::UnknownLetter(ident.to_string()));
    }
    ident
        .chars()
        .map(|ch| {
            names.get(&ch.to_string()).map(|&l| (l, false)).ok_or_else(|| GroupError::UnknownLetter(ch.to_string()))
        })
        .collect()
}

fn parse_exponent(chars: &[char], pos: &mut usize) -> Result<i64, GroupError> {
    if *pos < chars.len() && chars[*pos] == '^' {
        *pos += 1;
        let mut sign = 1;
        if *pos < chars.len() && (chars[*pos] == '-' || chars[*pos] == '+') {
            if chars[*pos] == '-' {
                sign = -1;
            }
            *pos += 1;
        }
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(GroupError::Syntax(format!("missing exponent at offset {start}")));
        }
        let digits: String = chars[start..*pos].iter().collect();
        let k: i64 = digits.parse().map_err(|_| GroupError::Syntax(format!("exponent {digits} too large")))?;
        return Ok(sign * k);
    }
    let mut sign = 1;
    let mut seen = false;
    if *pos < chars.len() && chars[*pos] == '⁻' {
        sign = -1;
        *pos += 1;
    }
    let mut k: i64 = 0;
    while *pos < chars.len() {
        match SUPERSCRIPT_DIGITS.iter().position(|&d| d == chars[*pos]) {
            Some(d) => {
                k = k * 10 + d as i64;
                seen = true;
                *pos += 1;
            }
            None => break,
        }
    }
    if sign == -1 && !seen {
        return Err(GroupError::Syntax(format!("dangling superscript minus at offset {}", *pos)));
    }
    Ok(if seen { sign * k } else { 1 })
}

fn power(w: &[(usize, bool)], k: i64) -> Word {
    let base: Word = if k < 0 { w.iter().rev().map(|&(l, i)| (l, !i)).collect() } else { w.to_vec() };
    let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    out
}

/// Space-separated letters with runs collapsed into powers.
pub(crate) fn format(word: &[(usize, bool)], letters: &[Letter]) -> String {
    format_by(word, |l| &letters[l].name)
}

pub(crate) fn format_by<'a>(word: &[(usize, bool)], name: impl Fn(usize) -> &'a str) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let (l, inv) = word[i];
        let mut j = i;
        while j < word.len() && word[j] == (l, inv) {
            j += 1;
        }
        let run = (j - i) as i64;
        let exp = if inv { -run } else { run };
        let name = name(l);
        parts.push(if exp == 1 { name.to_string() } else { format!("{name}^{exp}") });
        i = j;
    }
    parts.join(" ")
}
