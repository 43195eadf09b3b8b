//! Run files: one `key = value` per line, `#` comments. The `verb` key picks
//! the command (`shift nf` etc. for the shift subcommands); every other key
//! becomes `--key value`. A value of `true` becomes a bare flag, `false` is
//! dropped, and a key may repeat (`seq = ...` twice gives two members).

pub fn argv_from_file(text: &str) -> Result<Vec<String>, String> {
    let mut verb: Option<Vec<String>> = None;
    let mut rest = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if k.is_empty() {
            return Err(format!("line {}: empty key", n + 1));
        }
        if k == "verb" {
            if verb.is_some() {
                return Err(format!("line {}: verb given twice", n + 1));
            }
            verb = Some(v.split_whitespace().map(str::to_string).collect());
            continue;
        }
        match v {
            "true" => rest.push(format!("--{k}")),
            "false" => {}
            _ => {
                rest.push(format!("--{k}"));
                rest.push(v.to_string());
            }
        }
    }
    let mut argv = verb.ok_or("the run file has no verb")?;
    if argv.is_empty() {
        return Err("empty verb".into());
    }
    argv.extend(rest);
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_arguments_in_file_order() {
        let a = argv_from_file("# W of Z/4\nverb = compute-w\nring = zmod4\nk_max = 2\nout = dot\nverbose = false\n").unwrap();
        assert_eq!(a, ["compute-w", "--ring", "zmod4", "--k-max", "2", "--out", "dot"]);
        let b = argv_from_file("verb = shift compact-search\nmirrored = true\n").unwrap();
        assert_eq!(b, ["shift", "compact-search", "--mirrored"]);
        assert!(argv_from_file("ring = gf2\n").is_err());
        assert!(argv_from_file("verb\n").is_err());
    }
}
