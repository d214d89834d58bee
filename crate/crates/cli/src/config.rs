//! `--config run.toml`: top-level keys, then keys of the table named after
//! the subcommand, become flags inserted ahead of the command-line flags.
//!
//! ```toml
//! command = "scan"   # used when no subcommand is given
//! alpha = "1/2"
//!
//! [scan]
//! x = "c1"
//! x-from = "1/20"
//! ```

use std::ffi::OsString;
use std::path::Path;

use toml::{Table, Value};

pub const COMMANDS: [&str; 8] =
    ["equilibrium", "stability", "scan", "bifurcation-1d", "bifurcation-2d", "continuation", "statics", "verify"];

fn flags(table: &Table, out: &mut Vec<String>) -> Result<(), String> {
    for (key, value) in table {
        if key == "command" || value.is_table() {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Boolean(true) => out.push(flag),
            Value::Boolean(false) => {}
            Value::String(s) => out.extend([flag, s.clone()]),
            Value::Integer(i) => out.extend([flag, i.to_string()]),
            Value::Float(f) => out.extend([flag, f.to_string()]),
            other => return Err(format!("config key `{key}` has unsupported value {other}")),
        }
    }
    Ok(())
}

/// Pull `--config PATH` out of `args` and splice the file's flags in after
/// the subcommand, so that explicit flags override them.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy().into_owned();
        if a == "--config" && i + 1 < args.len() {
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.into());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {}: {e}", Path::new(&path).display()))?;
    let table: Table = text.parse().map_err(|e| format!("invalid config {}: {e}", Path::new(&path).display()))?;

    let pos = args.iter().position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref()));
    let (pos, command) = match pos {
        Some(p) => (p, args[p].to_string_lossy().into_owned()),
        None => {
            let Some(Value::String(c)) = table.get("command") else {
                return Err("no subcommand given and the config has no `command` key".into());
            };
            if !COMMANDS.contains(&c.as_str()) {
                return Err(format!("config names unknown command `{c}`"));
            }
            args.insert(1, c.into());
            (1, c.clone())
        }
    };
    let mut extra = Vec::new();
    flags(&table, &mut extra)?;
    if let Some(Value::Table(section)) = table.get(&command) {
        flags(section, &mut extra)?;
    }
    let tail = args.split_off(pos + 1);
    args.extend(extra.into_iter().map(OsString::from));
    args.extend(tail);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str], toml: &str) -> Vec<String> {
        let dir = std::env::temp_dir().join(format!("bertrand-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let file = dir.join(format!("{}.toml", args.len()));
        std::fs::write(&file, toml).unwrap();
        let mut v: Vec<OsString> = args.iter().map(OsString::from).collect();
        v.extend(["--config".into(), file.into_os_string()]);
        expand(v).unwrap().into_iter().map(|s| s.into_string().unwrap()).collect()
    }

    #[test]
    fn section_follows_top_level_and_flags_come_last() {
        let got = run(&["bertrand", "stability", "--k", "2"], "alpha = \"1/3\"\n[stability]\nc = \"1/5\"\n");
        assert_eq!(got, ["bertrand", "stability", "--alpha", "1/3", "--c", "1/5", "--k", "2"]);
    }

    #[test]
    fn command_key_supplies_subcommand() {
        let got = run(&["bertrand"], "command = \"verify\"\ntables = true\nidentities = false\n");
        assert_eq!(got, ["bertrand", "verify", "--tables"]);
        let got = run(&["bertrand", "--alpha", "1/2"], "command = \"verify\"\n");
        assert_eq!(got, ["bertrand", "verify", "--alpha", "1/2"]);
    }
}
