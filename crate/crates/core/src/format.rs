//! Line-oriented text format for diagrams.
//!
//! ```text
//! adic-diagram v1
//! rank 2
//! levels 3
//! level 2 q 3
//! word 1 1 2 1
//! word 2 2 1 2
//! level 3 q 4
//! word 1 (1 2)^2
//! word 2 2 1 1 2
//! ```
//!
//! `#` starts a comment. A level may declare `q *` to allow per-vertex word
//! lengths (restricted diagrams).

use num_bigint::BigUint;
use num_traits::Zero;

use crate::diagram::{DiagramSpec, LevelSpec};
use crate::error::{Error, Result};
use crate::word::{Block, OrderWord, Vertex};

pub const HEADER: &str = "adic-diagram v1";

struct PendingLevel {
    level: usize,
    line: usize,
    q: Option<BigUint>,
    words: Vec<Option<OrderWord>>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_spec(text: &str) -> Result<DiagramSpec> {
    let mut rank: Option<usize> = None;
    let mut depth: Option<usize> = None;
    let mut seen_header = false;
    let mut levels: Vec<PendingLevel> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if !seen_header {
            if content.split_whitespace().collect::<Vec<_>>().join(" ") != HEADER {
                return Err(perr(line, format!("expected header '{HEADER}'")));
            }
            seen_header = true;
            continue;
        }
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap();
        match key {
            "rank" => {
                let d: usize = parse_num(toks.next(), line, "rank")?;
                if d == 0 {
                    return Err(perr(line, "rank must be positive"));
                }
                rank = Some(d);
            }
            "levels" => depth = Some(parse_num(toks.next(), line, "level count")?),
            "level" => {
                let d = rank.ok_or_else(|| perr(line, "'rank' must precede levels"))?;
                let n: usize = parse_num(toks.next(), line, "level index")?;
                if toks.next() != Some("q") {
                    return Err(perr(line, "expected 'level <n> q <q_n>'"));
                }
                let q = match toks.next() {
                    Some("*") => None,
                    other => Some(parse_num::<BigUint>(other, line, "q")?),
                };
                if let Some(q) = &q {
                    if q.is_zero() {
                        return Err(perr(line, "q must be positive"));
                    }
                }
                if levels.iter().any(|l| l.level == n) {
                    return Err(Error::DuplicateLevel(n));
                }
                let expected = levels.len() + 2;
                if n != expected {
                    return Err(perr(line, format!("expected level {expected}, found {n}")));
                }
                levels.push(PendingLevel { level: n, line, q, words: vec![None; d] });
            }
            "word" => {
                let d = rank.ok_or_else(|| perr(line, "'rank' must precede words"))?;
                let lvl = levels.last_mut().ok_or_else(|| perr(line, "word outside a level"))?;
                let t: u64 = parse_num(toks.next(), line, "vertex")?;
                let t = Vertex::checked(t, d).map_err(|e| perr(line, e.to_string()))?;
                let rest: Vec<&str> = toks.collect();
                let word = parse_word(&rest.join(" "), d).map_err(|e| match e {
                    Error::Parse { msg, .. } => perr(line, msg),
                    other => perr(line, other.to_string()),
                })?;
                if let Some(q) = &lvl.q {
                    if word.len() != q {
                        return Err(Error::LengthMismatch {
                            level: lvl.level,
                            vertex: t.label(),
                            found: word.len().to_string(),
                            expected: q.to_string(),
                        });
                    }
                }
                if lvl.words[t.index()].is_some() {
                    return Err(perr(line, format!("duplicate word for vertex {t}")));
                }
                lvl.words[t.index()] = Some(word);
            }
            other => return Err(perr(line, format!("unknown directive '{other}'"))),
        }
    }
    if !seen_header {
        return Err(perr(1, format!("expected header '{HEADER}'")));
    }
    let d = rank.ok_or_else(|| perr(0, "missing 'rank'"))?;
    let mut out = Vec::with_capacity(levels.len());
    for lvl in levels {
        let mut words = Vec::with_capacity(d);
        for (i, w) in lvl.words.into_iter().enumerate() {
            words.push(w.ok_or(Error::MissingWord { level: lvl.level, vertex: i as u32 + 1 })?);
        }
        let _ = lvl.line;
        out.push(LevelSpec { level: lvl.level, words });
    }
    if let Some(n) = depth {
        if n != out.len() + 1 {
            return Err(Error::LevelSequence { depth: n, found: out.len() + 1 });
        }
    }
    DiagramSpec::new(d, out)
}

/// Parses word tokens: bare vertex labels and `(<v1> ... <vk>)^<r>` groups.
pub fn parse_word(text: &str, rank: usize) -> Result<OrderWord> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut blocks: Vec<Block> = Vec::new();
    let mut literal: Vec<Vertex> = Vec::new();

    let read_number = |i: &mut usize| -> Option<String> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (*i > start).then(|| chars[start..*i].iter().collect())
    };
    let vertex = |s: &str| -> Result<Vertex> {
        let v: u64 = s.parse().map_err(|_| perr(0, format!("invalid vertex '{s}'")))?;
        Vertex::checked(v, rank)
    };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let s = read_number(&mut i).unwrap();
            literal.push(vertex(&s)?);
        } else if c == '(' {
            i += 1;
            let mut group = Vec::new();
            loop {
                while i < chars.len() && chars[i].is_whitespace() {
                    i += 1;
                }
                if i >= chars.len() {
                    return Err(perr(0, "unterminated group"));
                }
                if chars[i] == ')' {
                    i += 1;
                    break;
                }
                let s = read_number(&mut i).ok_or_else(|| perr(0, format!("unexpected '{}'", chars[i])))?;
                group.push(vertex(&s)?);
            }
            if group.is_empty() {
                return Err(perr(0, "empty group"));
            }
            if i >= chars.len() || chars[i] != '^' {
                return Err(perr(0, "group must be followed by ^<repeat>"));
            }
            i += 1;
            let r = read_number(&mut i).ok_or_else(|| perr(0, "missing repeat count"))?;
            if !literal.is_empty() {
                blocks.push(Block::literal(std::mem::take(&mut literal)));
            }
            blocks.push(Block::new(group, r.parse::<BigUint>().unwrap()));
        } else {
            return Err(perr(0, format!("unexpected '{c}'")));
        }
    }
    if !literal.is_empty() {
        blocks.push(Block::literal(literal));
    }
    OrderWord::from_blocks(blocks).map_err(|_| perr(0, "empty word"))
}

pub fn serialize_spec(spec: &DiagramSpec) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("rank {}\nlevels {}\n", spec.rank(), spec.depth()));
    for lvl in spec.levels() {
        match lvl.q() {
            Some(q) => out.push_str(&format!("level {} q {}\n", lvl.level, q)),
            None => out.push_str(&format!("level {} q *\n", lvl.level)),
        }
        for (i, w) in lvl.words.iter().enumerate() {
            out.push_str(&format!("word {} {}\n", i + 1, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::vertices;

    const TOY: &str = "adic-diagram v1\n# toy\nrank 2\nlevels 2\nlevel 2 q 3\nword 1 1 2 1\nword 2 2 1 2\n";

    #[test]
    fn parses_a_small_document() {
        let s = parse_spec(TOY).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.q(2).unwrap(), BigUint::from(3u32));
        assert_eq!(parse_spec(&serialize_spec(&s)).unwrap(), s);
        assert!(serialize_spec(&s).lines().count() <= 20);
    }

    #[test]
    fn groups_and_literals_mix() {
        let w = parse_word("1 (2 3)^3 (4)^2 1", 4).unwrap();
        assert_eq!(w.expand(100).unwrap(), vertices(&[1, 2, 3, 2, 3, 2, 3, 4, 4, 1]));
        assert_eq!(parse_word("(12)^2", 20).unwrap().expand(10).unwrap(), vertices(&[12, 12]));
        assert!(parse_word("(1 2", 4).is_err());
        assert!(parse_word("(1 2)", 4).is_err());
        assert!(parse_word("()^2", 4).is_err());
        assert!(parse_word("5", 4).is_err());
        assert!(parse_word("", 4).is_err());
    }

    #[test]
    fn errors_name_the_offending_line() {
        let bad = TOY.replace("word 1 1 2 1", "word 1 1 2");
        assert!(matches!(parse_spec(&bad), Err(Error::LengthMismatch { level: 2, vertex: 1, .. })));
        let bad = TOY.replace("word 2 2 1 2", "word 2 2 x 2");
        assert_eq!(parse_spec(&bad).unwrap_err(), Error::Parse { line: 7, msg: "unexpected 'x'".into() });
        let bad = TOY.replace("word 2 2 1 2", "word 2 2 3 2");
        assert!(matches!(parse_spec(&bad), Err(Error::Parse { line: 7, .. })));
        let bad = TOY.replace("word 2 2 1 2\n", "");
        assert_eq!(parse_spec(&bad).unwrap_err(), Error::MissingWord { level: 2, vertex: 2 });
        let bad = format!("{TOY}level 2 q 3\n");
        assert_eq!(parse_spec(&bad).unwrap_err(), Error::DuplicateLevel(2));
        assert!(matches!(parse_spec("rank 2\n"), Err(Error::Parse { line: 1, .. })));
        let bad = TOY.replace("levels 2", "levels 3");
        assert!(matches!(parse_spec(&bad), Err(Error::LevelSequence { .. })));
    }

    #[test]
    fn variable_length_levels_round_trip() {
        let text = "adic-diagram v1\nrank 2\nlevels 2\nlevel 2 q *\nword 1 1 2\nword 2 (2 1)^2 2\n";
        let s = parse_spec(text).unwrap();
        assert!(!s.is_toeplitz());
        assert_eq!(parse_spec(&serialize_spec(&s)).unwrap(), s);
    }
}
