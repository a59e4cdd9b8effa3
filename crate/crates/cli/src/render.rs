//! Human-readable rendering of a JSON report. The JSON value is the single
//! source of every number shown, so the two output modes cannot disagree.

use serde_json::Value;

pub fn human(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().map(|i| scalar(i).unwrap()).collect::<Vec<_>>().join(", ")
        )),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        Value::Object(m) if m.len() <= 6 && m.values().all(|x| matches!(x, Value::String(_) | Value::Number(_))) => {
            Some(format!(
                "{{{}}}",
                m.iter().map(|(k, x)| format!("{k}: {}", scalar(x).unwrap())).collect::<Vec<_>>().join(", ")
            ))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{}: {s}\n", k.replace('_', " "))),
                    None => {
                        out.push_str(&format!("{pad}{}:\n", k.replace('_', " ")));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{}]\n", i + 1));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap())),
    }
}
