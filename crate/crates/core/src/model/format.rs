//! The `pag v1` text format.
//!
//! ```text
//! pag v1 m=<m> n=<n> mode=<d|r> seed=<hex or ->
//! 2: <w1> ... <wm>
//! ...
//! <n>: <w1> ... <wm>
//! ```
//!
//! One line per vertex `t = 2..=n`, targets in ascending order, single spaces,
//! LF line endings and no trailing whitespace. The seed is lowercase
//! hexadecimal without a prefix, or `-` for hand-built graphs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::graph::{PaGraph, Vertex, WeightMode};

const MAGIC: &str = "pag";
const VERSION: &str = "v1";

pub fn encode_graph(g: &PaGraph) -> String {
    let mut out = String::with_capacity(16 + g.n() as usize * (4 + 6 * g.m() as usize));
    let seed = match g.seed() {
        Some(s) => format!("{s:x}"),
        None => "-".to_string(),
    };
    let _ = writeln!(
        out,
        "{MAGIC} {VERSION} m={} n={} mode={} seed={seed}",
        g.m(),
        g.n(),
        g.weight_mode().code()
    );
    for (t, step) in g.steps() {
        let _ = write!(out, "{t}:");
        for w in step {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out
}

fn header_field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|tok| tok.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| Error::parse(1, format!("expected `{key}=` field")))
}

fn parse_u32(line: usize, s: &str, what: &str) -> Result<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line, format!("{what} `{s}` is not a decimal integer")));
    }
    s.parse()
        .map_err(|_| Error::parse(line, format!("{what} `{s}` is out of range")))
}

pub fn decode_graph(text: &str) -> Result<PaGraph> {
    if text.contains('\r') {
        return Err(Error::parse(1, "CR characters are not allowed; use LF line endings"));
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or("");
    let mut tokens = header.split(' ');
    if tokens.next() != Some(MAGIC) {
        return Err(Error::parse(1, "missing `pag` magic"));
    }
    match tokens.next() {
        Some(VERSION) => {}
        Some(v) => return Err(Error::parse(1, format!("unsupported version `{v}`"))),
        None => return Err(Error::parse(1, "missing version")),
    }
    let m = parse_u32(1, header_field(tokens.next(), "m")?, "m")?;
    let n = parse_u32(1, header_field(tokens.next(), "n")?, "n")?;
    let mode_code = header_field(tokens.next(), "mode")?;
    let mode =
        WeightMode::from_code(mode_code).ok_or_else(|| Error::parse(1, format!("unknown mode `{mode_code}`")))?;
    let seed = match header_field(tokens.next(), "seed")? {
        "-" => None,
        hex if !hex.is_empty() && hex.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) => {
            Some(u64::from_str_radix(hex, 16).map_err(|_| Error::parse(1, format!("seed `{hex}` is out of range")))?)
        }
        other => return Err(Error::parse(1, format!("seed `{other}` is not lowercase hex or `-`"))),
    };
    if tokens.next().is_some() {
        return Err(Error::parse(1, "unexpected trailing header fields"));
    }
    if m == 0 || n == 0 {
        return Err(Error::parse(1, "m and n must be positive"));
    }

    let mut flat: Vec<Vertex> = Vec::with_capacity(m as usize * (n as usize - 1));
    let mut expected_t: u32 = 2;
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if expected_t > n {
            return Err(Error::parse(lineno, format!("extra line after vertex {n}")));
        }
        let (label, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(lineno, "expected `<t>: <targets>`"))?;
        let t = parse_u32(lineno, label, "vertex label")?;
        if t != expected_t {
            return Err(Error::parse(lineno, format!("expected vertex {expected_t}, found {t}")));
        }
        let targets = rest
            .strip_prefix(' ')
            .ok_or_else(|| Error::parse(lineno, "expected a space after `:`"))?;
        let mut count = 0u32;
        let mut prev = 0;
        for tok in targets.split(' ') {
            let w = parse_u32(lineno, tok, "target")?;
            if w == 0 || w >= t {
                return Err(Error::parse(
                    lineno,
                    format!("target {w} of vertex {t} is not in 1..={}", t - 1),
                ));
            }
            if w < prev {
                return Err(Error::parse(
                    lineno,
                    format!("targets of vertex {t} are not in ascending order"),
                ));
            }
            prev = w;
            count += 1;
            if count > m {
                return Err(Error::parse(lineno, format!("vertex {t} has more than m={m} targets")));
            }
            flat.push(w);
        }
        if count != m {
            return Err(Error::parse(
                lineno,
                format!("vertex {t} has {count} targets, expected m={m}"),
            ));
        }
        expected_t += 1;
    }
    if expected_t <= n {
        return Err(Error::parse(
            expected_t as usize,
            format!("missing line for vertex {expected_t}"),
        ));
    }
    PaGraph::from_flat(m, n, flat, mode, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generate;

    #[test]
    fn star_encoding() {
        let g = PaGraph::from_choices(1, 3, vec![vec![1], vec![1]], WeightMode::SelfLoopDoubled).unwrap();
        assert_eq!(encode_graph(&g), "pag v1 m=1 n=3 mode=d seed=-\n2: 1\n3: 1\n");
    }

    #[test]
    fn seed_and_mode_in_header() {
        let g = generate(2, 3, 255, WeightMode::ProperRenormalized).unwrap();
        let text = encode_graph(&g);
        assert!(text.starts_with("pag v1 m=2 n=3 mode=r seed=ff\n2: 1 1\n"), "{text}");
        assert_eq!(decode_graph(&text).unwrap(), g);
    }

    #[test]
    fn single_vertex_has_only_header() {
        let g = generate(4, 1, 0, WeightMode::default()).unwrap();
        assert_eq!(encode_graph(&g), "pag v1 m=4 n=1 mode=d seed=0\n");
        assert_eq!(decode_graph(&encode_graph(&g)).unwrap(), g);
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn arity_violation_names_line() {
        let text = "pag v1 m=2 n=3 mode=d seed=-\n2: 1 1\n3: 1 1 2\n";
        assert_eq!(line_of(decode_graph(text).unwrap_err()), 3);
        let text = "pag v1 m=2 n=3 mode=d seed=-\n2: 1\n3: 1 1\n";
        assert_eq!(line_of(decode_graph(text).unwrap_err()), 2);
    }

    #[test]
    fn rejects_malformed_streams() {
        let bad = [
            ("gap v1 m=1 n=2 mode=d seed=-\n2: 1\n", 1),
            ("pag v2 m=1 n=2 mode=d seed=-\n2: 1\n", 1),
            ("pag v1 m=1 n=2 mode=x seed=-\n2: 1\n", 1),
            ("pag v1 m=1 n=2 mode=d seed=XY\n2: 1\n", 1),
            ("pag v1 m=2 n=3 mode=d seed=-\n2: 1 1\n3: 2 1\n", 3),
            ("pag v1 m=1 n=3 mode=d seed=-\n2: 1\n3: 3\n", 3),
            ("pag v1 m=1 n=3 mode=d seed=-\n2: 1\n", 3),
            ("pag v1 m=1 n=2 mode=d seed=-\n2: 1\n3: 1\n", 3),
            ("pag v1 m=1 n=3 mode=d seed=-\n3: 1\n2: 1\n", 2),
            ("pag v1 m=1 n=2 mode=d seed=-\n2: 1 \n", 2),
            ("pag v1 m=1 n=2 mode=d seed=-\r\n2: 1\r\n", 1),
        ];
        for (text, line) in bad {
            assert_eq!(line_of(decode_graph(text).unwrap_err()), line, "{text:?}");
        }
    }
}
