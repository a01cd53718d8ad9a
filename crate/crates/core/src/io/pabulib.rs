use std::collections::HashMap;

use crate::election::Election;
use crate::error::{parse_err, Error, Result};

/// The parts of a Pabulib file this crate models. Project costs and every
/// other column are read past and dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PabulibInstance {
    /// META entries in file order.
    pub meta: Vec<(String, String)>,
    /// Project ids in file order.
    pub projects: Vec<String>,
    /// `(voter id, approved project ids)` in file order.
    pub votes: Vec<(String, Vec<String>)>,
}

impl PabulibInstance {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Meta,
    Projects,
    Votes,
}

fn split_record(line: &str, ln: usize) -> Result<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(b';')
        .has_headers(false)
        .flexible(true)
        .from_reader(line.as_bytes());
    match rdr.records().next() {
        Some(Ok(r)) => Ok(r.iter().map(|f| f.trim().to_string()).collect()),
        Some(Err(e)) => Err(parse_err(ln, e.to_string())),
        None => Ok(Vec::new()),
    }
}

pub fn parse_pabulib(text: &str) -> Result<PabulibInstance> {
    let mut inst = PabulibInstance::default();
    let mut section = Section::None;
    let mut header: Option<Vec<String>> = None;
    let mut seen = [false; 3];
    let mut project_index: HashMap<String, usize> = HashMap::new();
    let mut id_col = 0;
    let mut vote_col = None;
    let mut voter_col = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim().trim_start_matches('\u{feff}');
        if line.is_empty() {
            continue;
        }
        let next = match line.to_ascii_uppercase().as_str() {
            "META" => Some(Section::Meta),
            "PROJECTS" => Some(Section::Projects),
            "VOTES" => Some(Section::Votes),
            _ => None,
        };
        if let Some(s) = next {
            let slot = s as usize - 1;
            if seen[slot] {
                return Err(parse_err(ln, format!("duplicate {line} section")));
            }
            seen[slot] = true;
            section = s;
            header = None;
            continue;
        }
        let fields = split_record(line, ln)?;
        if header.is_none() {
            let cols: Vec<String> = fields.iter().map(|f| f.to_ascii_lowercase()).collect();
            let find = |name: &str| cols.iter().position(|c| c == name);
            match section {
                Section::None => return Err(parse_err(ln, "content before the META section")),
                Section::Meta => {}
                Section::Projects => id_col = find("project_id").unwrap_or(0),
                Section::Votes => {
                    voter_col = find("voter_id").unwrap_or(0);
                    vote_col = Some(
                        find("vote").ok_or_else(|| parse_err(ln, "VOTES header lacks a 'vote' column"))?,
                    );
                }
            }
            header = Some(cols);
            continue;
        }
        let get = |c: usize| -> Result<&str> {
            fields.get(c).map(String::as_str).ok_or_else(|| {
                parse_err(ln, format!("expected at least {} fields, got {}", c + 1, fields.len()))
            })
        };
        match section {
            Section::Meta => {
                let key = get(0)?.to_string();
                let value = fields.get(1).cloned().unwrap_or_default();
                if key == "vote_type" && value != "approval" {
                    return Err(Error::WrongBallotType(format!(
                        "line {ln}: vote_type '{value}' is not supported, only approval"
                    )));
                }
                inst.meta.push((key, value));
            }
            Section::Projects => {
                let id = get(id_col)?.to_string();
                if project_index.insert(id.clone(), inst.projects.len()).is_some() {
                    return Err(parse_err(ln, format!("duplicate project id '{id}'")));
                }
                inst.projects.push(id);
            }
            Section::Votes => {
                let voter = get(voter_col)?.to_string();
                let list = get(vote_col.expect("set with the header"))?;
                let mut approved = Vec::new();
                for p in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    if !project_index.contains_key(p) {
                        return Err(parse_err(ln, format!("vote of '{voter}' references unknown project '{p}'")));
                    }
                    approved.push(p.to_string());
                }
                inst.votes.push((voter, approved));
            }
            Section::None => unreachable!("handled with the header"),
        }
    }

    let end = text.lines().count().max(1);
    for (i, name) in ["META", "PROJECTS", "VOTES"].iter().enumerate() {
        if !seen[i] {
            return Err(parse_err(end, format!("missing {name} section")));
        }
    }
    let check = |key: &str, actual: usize| -> Result<()> {
        match inst.meta_value(key) {
            Some(v) => match v.parse::<usize>() {
                Ok(x) if x == actual => Ok(()),
                _ => Err(parse_err(end, format!("META {key} = {v} but the file has {actual}"))),
            },
            None => Ok(()),
        }
    };
    check("num_projects", inst.projects.len())?;
    check("num_votes", inst.votes.len())?;
    Ok(inst)
}

/// Renders the modeled fields back into Pabulib text.
pub fn write_pabulib(p: &PabulibInstance) -> String {
    let mut out = String::from("META\nkey;value\n");
    for (k, v) in &p.meta {
        out.push_str(&format!("{k};{v}\n"));
    }
    out.push_str("PROJECTS\nproject_id\n");
    for id in &p.projects {
        out.push_str(id);
        out.push('\n');
    }
    out.push_str("VOTES\nvoter_id;vote\n");
    for (voter, approved) in &p.votes {
        out.push_str(&format!("{voter};{}\n", approved.join(",")));
    }
    out
}

/// `max(2, ⌊m/f⌋)`, lowered to `m − 1` when that would leave no
/// unelected candidate.
pub fn committee_size_for_divisor(m: usize, f: usize) -> Result<usize> {
    if f == 0 {
        return Err(Error::InvalidParameter("divisor must be positive".into()));
    }
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "{m} projects leave no valid committee size"
        )));
    }
    Ok((m / f).max(2).min(m - 1))
}

/// Approval election with voters in file order and candidates in PROJECTS
/// order.
pub fn to_election(p: &PabulibInstance, k: usize) -> Result<Election> {
    let index: HashMap<&str, usize> = p
        .projects
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let m = p.projects.len();
    let mut rows = Vec::with_capacity(p.votes.len());
    for (voter, approved) in &p.votes {
        let mut row = vec![0.0; m];
        for id in approved {
            let &c = index.get(id.as_str()).ok_or_else(|| {
                Error::InvalidElection(format!("vote of '{voter}' references unknown project '{id}'"))
            })?;
            row[c] = 1.0;
        }
        rows.push(row);
    }
    Election::new(&rows, k, Some(1.0))
}
