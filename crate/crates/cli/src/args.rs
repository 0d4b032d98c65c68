use schubert_core::{CosetTable, Error, SchubertClass};

/// Parses "1,3" into a sorted, deduplicated set of indices in `1..=rank`.
pub fn parse_k(s: &str, rank: usize) -> Result<Vec<usize>, Error> {
    let mut k = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part.parse().map_err(|_| Error::Parse(format!("bad index {part:?} in K")))?;
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange { index: i, rank });
        }
        k.push(i);
    }
    if k.is_empty() {
        return Err(Error::Parse("K must not be empty".into()));
    }
    k.sort_unstable();
    k.dedup();
    Ok(k)
}

/// Resolves "w3" (the class of s_3), "4.2" (s_{4,2}) or a word "3,2,1".
pub fn parse_class(table: &CosetTable, s: &str) -> Result<SchubertClass, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("cannot read class {s:?}"));
    if let Some(rest) = s.strip_prefix(['w', 'W']) {
        let i: usize = rest.parse().map_err(|_| bad())?;
        return table.find_word(&[i]);
    }
    if let Some((r, i)) = s.split_once('.') {
        let r: usize = r.parse().map_err(|_| bad())?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let c = SchubertClass::new(r, i);
        table.check(c)?;
        return Ok(c);
    }
    if s.is_empty() || s == "e" {
        return Ok(SchubertClass::new(0, 1));
    }
    let word: Vec<usize> = s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    table.find_word(&word)
}
