//! `--config` files: INI sections named after a subcommand (`[field map]`)
//! whose keys are long option names. Keys in the unnamed preamble apply to
//! whichever subcommand runs. Options given on the command line win.

use std::collections::HashSet;
use std::path::Path;

use clap::{Arg, ArgAction, Command};
use fluxforge_core::format::parse_ini;

use crate::error::CliError;

/// Position of the `--config` value in `argv`, if present.
fn config_path(argv: &[String]) -> Result<Option<String>, CliError> {
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            return argv.get(i + 1).cloned().map(Some).ok_or_else(|| CliError::usage("--config needs a file path"));
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Ok(Some(v.to_string()));
        }
    }
    Ok(None)
}

/// The first two positional tokens, i.e. the subcommand path, and the index
/// just past them.
fn command_path(argv: &[String]) -> (Vec<String>, usize) {
    let mut out = Vec::new();
    let mut skip = false;
    let mut end = 1;
    for (i, a) in argv.iter().enumerate().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--config" {
            skip = true;
            continue;
        }
        if a.starts_with('-') {
            break;
        }
        out.push(a.clone());
        end = i + 1;
        if out.len() == 2 {
            break;
        }
    }
    (out, end)
}

fn given_flags(argv: &[String]) -> HashSet<String> {
    argv.iter().filter_map(|a| a.strip_prefix("--")).map(|a| a.split('=').next().unwrap_or(a).to_string()).collect()
}

fn leaf<'a>(root: &'a Command, path: &[String]) -> Option<&'a Command> {
    let mut cmd = root;
    for p in path {
        cmd = cmd.find_subcommand(p)?;
    }
    Some(cmd)
}

/// Whether the user already gave this option or one that conflicts with it.
fn overridden(cmd: &Command, arg: &Arg, given: &HashSet<String>) -> bool {
    let named = |a: &Arg| a.get_long().is_some_and(|l| given.contains(l));
    named(arg) || cmd.get_arg_conflicts_with(arg).into_iter().any(named)
}

fn expand_entry<'a>(
    cmd: &'a Command,
    section: &str,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(&'a Arg, Vec<String>), CliError> {
    let name = key.replace('_', "-");
    let arg = cmd
        .get_arguments()
        .find(|a| a.get_long() == Some(name.as_str()) && name != "config")
        .ok_or_else(|| CliError::usage(format!("config line {line}: unknown key `{key}` for [{section}]")))?;
    let flag = format!("--{name}");
    let expanded = match arg.get_action() {
        ArgAction::SetTrue => match value {
            "true" | "yes" | "1" => vec![flag],
            "false" | "no" | "0" => Vec::new(),
            other => {
                return Err(CliError::usage(format!(
                    "config line {line}: `{key}` expects true or false, got `{other}`"
                )))
            }
        },
        ArgAction::Append => value.split_whitespace().flat_map(|v| [flag.clone(), v.to_string()]).collect(),
        _ => vec![flag, value.to_string()],
    };
    Ok((arg, expanded))
}

/// Rewrites `argv` so that config values appear as options ahead of the
/// user's own, skipping any option the user already gave or contradicted.
pub fn apply(argv: Vec<String>, root: &Command) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::usage(format!("cannot read config file {path}: {e}")))?;
    let sections = parse_ini(&text).map_err(|e| CliError::usage(format!("config file {path}: {e}")))?;

    let (cmd_path, split) = command_path(&argv);
    let Some(target) = leaf(root, &cmd_path).filter(|c| c.get_subcommands().next().is_none()) else {
        return Ok(argv);
    };
    let current = cmd_path.join(" ");
    let given = given_flags(&argv);

    let mut injected = Vec::new();
    for s in &sections {
        let section_path: Vec<String> = s.name.split_whitespace().map(String::from).collect();
        let cmd = if s.name.is_empty() {
            target
        } else {
            leaf(root, &section_path)
                .filter(|c| c.get_subcommands().next().is_none())
                .ok_or_else(|| CliError::usage(format!("config line {}: unknown section [{}]", s.line, s.name)))?
        };
        let applies = s.name.is_empty() || section_path.join(" ") == current;
        for (key, value, line) in &s.entries {
            let (arg, expanded) = expand_entry(cmd, &s.name, key, value, *line)?;
            if applies && !overridden(cmd, arg, &given) {
                injected.extend(expanded);
            }
        }
    }

    let mut out = argv[..split].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[split..]);
    Ok(out)
}
