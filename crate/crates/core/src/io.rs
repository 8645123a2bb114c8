//! JSON file formats for channels and games.
//!
//! A two-sender channel file looks like
//!
//! ```json
//! { "d1": 2, "d2": 2, "dout": 2,
//!   "transition": [[[1.0, 0.5], [0.5, 0.5]], [[0.0, 0.5], [0.5, 0.5]]] }
//! ```
//!
//! with `transition[z][b1][b2]`. Channels with more senders use
//! `"input_sizes": [..]` instead of `d1`/`d2` and one nesting level per
//! sender. A game file lists `players`, `question_sizes`, `answer_sizes` and
//! `winning`, an array of `[question tuple, answer tuple]` pairs (0-based),
//! plus an optional `promise` array of question tuples.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{self, NonlocalGame};
use crate::mac::{unflatten, Mac};

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { message: e.to_string(), line: e.line(), column: e.column() }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MacDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input_sizes: Option<Vec<usize>>,
    dout: usize,
    transition: Value,
}

fn flatten_nested(value: &Value, shape: &[usize], path: &mut String, out: &mut Vec<f64>) -> Result<()> {
    match shape.split_first() {
        None => {
            let v = value.as_f64().ok_or_else(|| {
                Error::Validation(format!("{path} is not a number"))
            })?;
            out.push(v);
            Ok(())
        }
        Some((&len, rest)) => {
            let items = value
                .as_array()
                .ok_or_else(|| Error::Validation(format!("{path} is not an array")))?;
            if items.len() != len {
                return Err(Error::Validation(format!(
                    "{path} has {} entries, expected {len}",
                    items.len()
                )));
            }
            for (i, item) in items.iter().enumerate() {
                let mark = path.len();
                path.push_str(&format!("[{i}]"));
                flatten_nested(item, rest, path, out)?;
                path.truncate(mark);
            }
            Ok(())
        }
    }
}

/// Parses a channel document.
pub fn parse_mac_str(text: &str) -> Result<Mac> {
    let doc: MacDocument = serde_json::from_str(text).map_err(parse_error)?;
    let sizes = match (doc.d1, doc.d2, doc.input_sizes) {
        (Some(d1), Some(d2), None) => vec![d1, d2],
        (None, None, Some(sizes)) => sizes,
        _ => {
            return Err(Error::Validation(
                "give either d1 and d2, or input_sizes".into(),
            ))
        }
    };
    let mut shape = vec![doc.dout];
    shape.extend(&sizes);
    let mut entries = Vec::new();
    flatten_nested(&doc.transition, &shape, &mut "transition".to_string(), &mut entries)?;
    Mac::new(sizes, doc.dout, entries)
}

/// Reads and validates a channel file.
pub fn parse_mac_file(path: impl AsRef<Path>) -> Result<Mac> {
    parse_mac_str(&read(path.as_ref())?)
}

fn nest(values: &[f64], shape: &[usize]) -> Value {
    match shape.split_first() {
        None => serde_json::json!(values[0]),
        Some((&len, rest)) => {
            let stride = values.len() / len;
            Value::Array((0..len).map(|i| nest(&values[i * stride..(i + 1) * stride], rest)).collect())
        }
    }
}

/// Serializes a channel in the file format.
pub fn write_mac(mac: &Mac) -> String {
    let sizes = mac.input_sizes();
    let mut shape = vec![mac.dout()];
    shape.extend(sizes);
    let two = sizes.len() == 2;
    let doc = MacDocument {
        d1: two.then(|| sizes[0]),
        d2: two.then(|| sizes[1]),
        input_sizes: (!two).then(|| sizes.to_vec()),
        dout: mac.dout(),
        transition: nest(mac.transition(), &shape),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameDocument {
    players: usize,
    question_sizes: Vec<usize>,
    answer_sizes: Vec<usize>,
    winning: Vec<(Vec<usize>, Vec<usize>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    promise: Option<Vec<Vec<usize>>>,
}

/// Parses a game document.
pub fn parse_game_str(text: &str) -> Result<NonlocalGame> {
    let doc: GameDocument = serde_json::from_str(text).map_err(parse_error)?;
    if doc.players < 2 {
        return Err(Error::Validation(format!("a game needs at least two players, got {}", doc.players)));
    }
    if doc.question_sizes.len() != doc.players || doc.answer_sizes.len() != doc.players {
        return Err(Error::Validation("alphabet lists must have one entry per player".into()));
    }
    let game = NonlocalGame::new(doc.question_sizes, doc.answer_sizes, doc.winning)?;
    match doc.promise {
        None => Ok(game),
        Some(tuples) => {
            let mut promise = Vec::with_capacity(tuples.len());
            for (i, t) in tuples.iter().enumerate() {
                let valid = t.len() == game.players()
                    && t.iter().zip(game.question_sizes()).all(|(v, s)| v < s);
                if !valid {
                    return Err(Error::Validation(format!("promise entry {i} ({t:?}) is out of range")));
                }
                promise.push(game.question_index(t));
            }
            game.with_promise(promise)
        }
    }
}

/// Loads `builtin:<name>` games or reads a game file.
///
/// Built-in names: `chsh`, `magic_square`, `multiparty_parity:<N>`,
/// `signalling:<m1>:<m2>`.
pub fn parse_game_file(spec: &str) -> Result<NonlocalGame> {
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin_game(name),
        None => parse_game_str(&read(Path::new(spec))?),
    }
}

fn builtin_game(name: &str) -> Result<NonlocalGame> {
    let parts: Vec<&str> = name.split(':').collect();
    let number = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Validation(format!("'{s}' is not a size in builtin:{name}")))
    };
    match parts[..] {
        ["chsh"] => Ok(game::chsh()),
        ["magic_square"] => Ok(game::magic_square()),
        ["multiparty_parity", n] => game::multiparty_parity(number(n)?),
        ["signalling", a, b] => game::signalling(number(a)?, number(b)?),
        _ => Err(Error::Validation(format!("unknown built-in game '{name}'"))),
    }
}

/// Serializes a game in the file format.
pub fn write_game(game: &NonlocalGame) -> String {
    let doc = GameDocument {
        players: game.players(),
        question_sizes: game.question_sizes().to_vec(),
        answer_sizes: game.answer_sizes().to_vec(),
        winning: game
            .winning_pairs()
            .iter()
            .map(|&(q, a)| (game.question_tuple(q), game.answer_tuple(a)))
            .collect(),
        promise: game
            .promise()
            .map(|p| p.iter().map(|&q| unflatten(q, game.question_sizes())).collect()),
    };
    serde_json::to_string(&doc).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    const NF1: &str = r#"{"d1": 2, "d2": 2, "dout": 2,
        "transition": [[[1.0, 0.5], [0.5, 0.5]], [[0.0, 0.5], [0.5, 0.5]]]}"#;

    #[test]
    fn parses_channel() {
        let mac = parse_mac_str(NF1).unwrap();
        assert_eq!(mac, crate::mac::examples::noise_free_one());
        assert_eq!(parse_mac_str(&write_mac(&mac)).unwrap(), mac);
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_mac_str("{\"d1\": 2,\n \"d2\": }").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_short_column() {
        let text = r#"{"d1": 1, "d2": 1, "dout": 2, "transition": [[[0.5]], [[0.4]]]}"#;
        let err = parse_mac_str(text).unwrap_err();
        assert!(err.to_string().contains("[0, 0]"), "{err}");
    }

    #[test]
    fn builtins() {
        assert_eq!(parse_game_file("builtin:chsh").unwrap().d(), 4);
        let g = parse_game_file("builtin:multiparty_parity:3").unwrap();
        assert_eq!((g.players(), g.d()), (3, 8));
        assert!(parse_game_file("builtin:nope").is_err());
    }

    #[test]
    fn game_round_trip() {
        let g = crate::game::multiparty_parity(3).unwrap();
        assert_eq!(parse_game_str(&write_game(&g)).unwrap(), g);
        let one = r#"{"players": 1, "question_sizes": [2], "answer_sizes": [2], "winning": []}"#;
        assert!(parse_game_str(one).is_err());
    }
}
