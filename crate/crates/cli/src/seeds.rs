use crate::error::CliError;

/// Parses `1..5` (inclusive), `3,8,13` or a mix such as `1..3,10`. Order is kept and
/// duplicates are dropped.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad =
        |part: &str, why: &str| CliError::Usage(format!("seed list `{spec}`: `{part}` {why}"));
    let mut seeds = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let lo: u64 = a
                .trim()
                .parse()
                .map_err(|_| bad(part, "is not a range of integers"))?;
            let hi: u64 = b
                .trim()
                .parse()
                .map_err(|_| bad(part, "is not a range of integers"))?;
            if hi < lo {
                return Err(bad(part, "is an empty range"));
            }
            if hi - lo >= 1_000_000 {
                return Err(bad(part, "spans more than a million seeds"));
            }
            seeds.extend(lo..=hi);
        } else {
            seeds.push(part.parse().map_err(|_| bad(part, "is not an integer"))?);
        }
    }
    let mut seen = std::collections::HashSet::new();
    seeds.retain(|s| seen.insert(*s));
    if seeds.is_empty() {
        return Err(CliError::Usage("seed list is empty".into()));
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_lists_and_mixes() {
        assert_eq!(parse_seeds("1..5").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_seeds("7, 3,7").unwrap(), vec![7, 3]);
        assert_eq!(parse_seeds("1..2,9").unwrap(), vec![1, 2, 9]);
    }

    #[test]
    fn empty_and_malformed_are_usage_errors() {
        for s in ["", " , ", "5..1", "a", "1..x"] {
            let e = parse_seeds(s).unwrap_err();
            assert_eq!(e.exit_code(), crate::error::exit::USAGE, "{s}");
        }
    }
}
