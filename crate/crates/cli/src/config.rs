use std::path::Path;

use pmtext_core::orchestration::{LlmConfig, TransportMode};
use pmtext_core::{Error, Result};

pub const CONFIG_ENV: &str = "PMTEXT_CONFIG";

/// Settings resolved from defaults, the config file and the environment.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Settings {
    pub llm: LlmConfig,
    /// Command template for the SQL executor, with `{table}` and `{sql}`.
    pub executor: Option<String>,
}

const KEYS: [(&str, &str); 8] = [
    ("endpoint", "PMTEXT_ENDPOINT"),
    ("model", "PMTEXT_MODEL"),
    ("api_key_env", "PMTEXT_API_KEY_ENV"),
    ("timeout", "PMTEXT_TIMEOUT"),
    ("transport", "PMTEXT_TRANSPORT"),
    ("mock_response", "PMTEXT_MOCK_RESPONSE"),
    ("reply_pointer", "PMTEXT_REPLY_POINTER"),
    ("executor", "PMTEXT_EXECUTOR"),
];

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "endpoint" => self.llm.endpoint = value.to_string(),
            "model" => self.llm.model = value.to_string(),
            "api_key_env" => self.llm.api_key_env = Some(value.to_string()).filter(|v| !v.is_empty()),
            "timeout" => {
                self.llm.timeout_secs = value
                    .parse()
                    .map_err(|_| Error::Config(format!("timeout must be a whole number of seconds, got `{value}`")))?
            }
            "transport" => {
                self.llm.mode = match value {
                    "live" => TransportMode::Live,
                    "mock" => match &self.llm.mode {
                        TransportMode::Mock(r) => TransportMode::Mock(r.clone()),
                        TransportMode::Live => TransportMode::Mock(Vec::new()),
                    },
                    other => return Err(Error::Config(format!("unknown transport `{other}` (live or mock)"))),
                }
            }
            "mock_response" => match &mut self.llm.mode {
                TransportMode::Mock(r) => r.push(value.replace("\\n", "\n")),
                TransportMode::Live => self.llm.mode = TransportMode::Mock(vec![value.replace("\\n", "\n")]),
            },
            "reply_pointer" => self.llm.reply_pointer = value.to_string(),
            "executor" => self.executor = Some(value.to_string()),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}

/// Layers defaults, the `key = value` file (a missing file is skipped) and
/// the environment.
pub fn load_config(path: Option<&Path>, env: &dyn Fn(&str) -> Option<String>) -> Result<Settings> {
    let mut settings = Settings::default();
    let path = path.map(Path::to_path_buf).or_else(|| env(CONFIG_ENV).map(Into::into));
    if let Some(path) = path.filter(|p| p.exists()) {
        let text = std::fs::read_to_string(&path)?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
            settings
                .set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
    }
    for (key, var) in KEYS {
        if let Some(value) = env(var) {
            if key == "mock_response" {
                settings.llm.mode = TransportMode::Mock(Vec::new());
            }
            settings.set(key, &value)?;
        }
    }
    Ok(settings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn env(pairs: &[(&str, &str)]) -> impl Fn(&str) -> Option<String> {
        let map: HashMap<String, String> = pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        move |k| map.get(k).cloned()
    }

    #[test]
    fn defaults_are_mock() {
        let s = load_config(None, &env(&[])).unwrap();
        assert_eq!(s.llm.mode, TransportMode::Mock(Vec::new()));
        assert_eq!(s.executor, None);
        let missing = load_config(Some(Path::new("/nonexistent/pmtext.conf")), &env(&[])).unwrap();
        assert_eq!(missing, s);
    }

    #[test]
    fn environment_overrides_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pmtext.conf");
        std::fs::write(&path, "# settings\nmodel = from-file\ntimeout = 5\nmock_response = a\\nb\n").unwrap();
        let s = load_config(Some(&path), &env(&[("PMTEXT_MODEL", "from-env")])).unwrap();
        assert_eq!(s.llm.model, "from-env");
        assert_eq!(s.llm.timeout_secs, 5);
        assert_eq!(s.llm.mode, TransportMode::Mock(vec!["a\nb".into()]));
        let via_env = load_config(None, &env(&[(CONFIG_ENV, path.to_str().unwrap())])).unwrap();
        assert_eq!(via_env.llm.model, "from-file");
    }

    #[test]
    fn malformed_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        for body in ["no equals sign", "colour = blue", "timeout = soon", "transport = carrier-pigeon"] {
            std::fs::write(&path, body).unwrap();
            assert!(matches!(load_config(Some(&path), &env(&[])), Err(Error::Config(_))), "{body}");
        }
    }
}
