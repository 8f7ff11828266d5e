//! The `.tbl` format: line 1 is `n`, then `n` lines of `n` space-separated
//! indices; row `i`, column `j` holds `i·j`; element 0 is the identity.

use std::path::Path;

use super::CatalogError;
use crate::LoopTable;

fn parse_err(line: usize, msg: impl Into<String>) -> CatalogError {
    CatalogError::Parse { line, msg: msg.into() }
}

pub fn parse_table(text: &str) -> Result<LoopTable, CatalogError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| parse_err(1, format!("bad order {header:?}")))?;
    if n == 0 {
        return Err(parse_err(1, "order must be positive"));
    }
    let mut raw = Vec::with_capacity(n);
    for r in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| parse_err(r + 2, "missing row"))?;
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| parse_err(ln + 1, format!("bad entry {tok:?}")))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(parse_err(ln + 1, format!("expected {n} entries, found {}", row.len())));
        }
        if let Some(v) = row.iter().find(|&&v| v >= n) {
            return Err(parse_err(ln + 1, format!("entry {v} out of range")));
        }
        raw.push(row);
    }
    if let Some((ln, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(ln + 1, "trailing content"));
    }
    if (0..n).any(|x| raw[0][x] != x || raw[x][0] != x) {
        return Err(parse_err(2, "element 0 is not the identity"));
    }
    LoopTable::validate(&raw).map_err(CatalogError::from)
}

pub fn format_table(l: &LoopTable) -> String {
    let mut s = format!("{}\n", l.order());
    for x in 0..l.order() {
        let row: Vec<String> = l.row(x).map(|v| v.to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_table(path: impl AsRef<Path>) -> Result<LoopTable, CatalogError> {
    parse_table(&std::fs::read_to_string(path)?)
}

pub fn write_table(l: &LoopTable, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    std::fs::write(path, format_table(l))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let t = parse_table("2\n0 1\n1 0\n").unwrap();
        assert_eq!(format_table(&t), "2\n0 1\n1 0\n");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_table("x\n").is_err());
        assert!(parse_table("2\n0 1\n1 0\n1\n").is_err());
        assert!(parse_table("2\n0 1\n1 2\n").is_err());
        assert!(parse_table("2\n0 1\n").is_err());
        assert!(parse_table("2\n1 0\n0 1\n").is_err());
        assert!(parse_table("2\n0 1 0\n1 0\n").is_err());
    }
}
