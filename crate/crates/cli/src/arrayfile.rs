//! Textual array files.
//!
//! Header line: `words <q> <k> <n>` or `perms <k> <n>`. Word rows are
//! contiguous digits when `q <= 10` and space-separated integers otherwise;
//! permutation rows are space-separated 1-based values. `parse(serialize(a))`
//! returns `a` for every valid array.

use shatterscan_core::{Array, Error, PermArray, Result, WordArray};

pub fn serialize(arr: &Array) -> String {
    let mut out = String::new();
    match arr {
        Array::Words(a) => {
            out.push_str(&format!("words {} {} {}\n", a.q(), a.k(), a.n()));
            for i in 0..a.k() {
                if a.q() <= 10 {
                    for &s in a.row(i) {
                        out.push(char::from_digit(s, 10).expect("symbol < 10"));
                    }
                } else {
                    let row: Vec<String> = a.row(i).iter().map(u32::to_string).collect();
                    out.push_str(&row.join(" "));
                }
                out.push('\n');
            }
        }
        Array::Perms(a) => {
            out.push_str(&format!("perms {} {}\n", a.k(), a.n()));
            for i in 0..a.k() {
                let row: Vec<String> = a.row(i).iter().map(u32::to_string).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: &str, what: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what} {tok:?}"),
    })
}

pub fn parse(text: &str) -> Result<Array> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    match tokens.as_slice() {
        ["words", q, k, n] => {
            let q: u32 = parse_num(q, "q", 1)?;
            let k: usize = parse_num(k, "k", 1)?;
            let n: usize = parse_num(n, "n", 1)?;
            let rows = parse_word_rows(&mut lines, q, k, n)?;
            Ok(Array::Words(
                WordArray::new(q, n, rows).map_err(to_parse_error)?,
            ))
        }
        ["perms", k, n] => {
            let k: usize = parse_num(k, "k", 1)?;
            let n: usize = parse_num(n, "n", 1)?;
            let mut rows = Vec::with_capacity(k);
            for i in 0..k {
                let (idx, raw) = lines.next().ok_or(Error::Parse {
                    line: i + 2,
                    msg: format!("expected {k} rows, file ends early"),
                })?;
                let row: Result<Vec<u32>> = raw
                    .split_whitespace()
                    .map(|tok| parse_num(tok, "value", idx + 1))
                    .collect();
                rows.push(row?);
            }
            Ok(Array::Perms(
                PermArray::new(n, rows).map_err(to_parse_error)?,
            ))
        }
        _ => Err(Error::Parse {
            line: 1,
            msg: format!("bad header {header:?}; expected \"words q k n\" or \"perms k n\""),
        }),
    }
}

fn parse_word_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    q: u32,
    k: usize,
    n: usize,
) -> Result<Vec<Vec<u32>>> {
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let (idx, raw) = lines.next().ok_or(Error::Parse {
            line: i + 2,
            msg: format!("expected {k} rows, file ends early"),
        })?;
        let line = idx + 1;
        let row: Vec<u32> = if q <= 10 {
            raw.chars()
                .map(|c| {
                    c.to_digit(10).ok_or(Error::Parse {
                        line,
                        msg: format!("bad digit {c:?}"),
                    })
                })
                .collect::<Result<_>>()?
        } else {
            raw.split_whitespace()
                .map(|tok| parse_num(tok, "symbol", line))
                .collect::<Result<_>>()?
        };
        if row.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("row has {} symbols, expected {n}", row.len()),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

fn to_parse_error(e: Error) -> Error {
    Error::Parse {
        line: 0,
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use shatterscan_core::randgen::{gen_perm_array, gen_word_array, SeedSpec};

    #[test]
    fn words_roundtrip_digit_form() {
        let a = Array::Words(gen_word_array(4, 3, 2, SeedSpec::new(1)).unwrap());
        let text = serialize(&a);
        assert!(text.starts_with("words 2 3 4\n"));
        assert_eq!(parse(&text).unwrap(), a);
    }

    #[test]
    fn words_roundtrip_wide_alphabet() {
        let a = Array::Words(gen_word_array(3, 2, 16, SeedSpec::new(2)).unwrap());
        let text = serialize(&a);
        assert!(text.starts_with("words 16 2 3\n"));
        assert!(text.lines().nth(1).unwrap().contains(' '));
        assert_eq!(parse(&text).unwrap(), a);
    }

    #[test]
    fn perms_roundtrip() {
        let a = Array::Perms(gen_perm_array(5, 3, SeedSpec::new(3)).unwrap());
        let text = serialize(&a);
        assert!(text.starts_with("perms 3 5\n"));
        assert_eq!(parse(&text).unwrap(), a);
    }

    #[test]
    fn empty_k_roundtrip() {
        let a = Array::Words(gen_word_array(3, 0, 2, SeedSpec::new(4)).unwrap());
        assert_eq!(parse(&serialize(&a)).unwrap(), a);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(parse(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse("bogus 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        match parse("words 2 2 3\n010\n0x0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse("words 2 2 3\n0101\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        // Symbol out of range surfaces as a parse failure too.
        assert!(parse("words 2 1 3\n020\n").is_err());
        assert!(parse("perms 1 3\n1 1 2\n").is_err());
    }
}
