use std::collections::{BTreeMap, VecDeque};
use std::sync::Mutex;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use super::{Role, Turn};
use crate::error::{Error, Result};

/// Boundary to a chat-completion service.
pub trait Transport {
    /// Sends the message history and returns the assistant reply.
    fn complete(&self, messages: &[Turn]) -> Result<String>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TransportMode {
    Live,
    /// Replies with the scripted responses in order; echoes the last user
    /// message when no responses are scripted.
    Mock(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LlmConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: Option<String>,
    pub timeout_secs: u64,
    pub mode: TransportMode,
    /// JSON pointer to the reply text in the response body.
    pub reply_pointer: String,
}

impl Default for LlmConfig {
    fn default() -> Self {
        Self {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4".into(),
            api_key_env: Some("OPENAI_API_KEY".into()),
            timeout_secs: 60,
            mode: TransportMode::Mock(Vec::new()),
            reply_pointer: "/choices/0/message/content".into(),
        }
    }
}

impl LlmConfig {
    /// Settings without secrets, for recording alongside a session.
    pub fn snapshot(&self) -> BTreeMap<String, String> {
        let mode = match &self.mode {
            TransportMode::Live => "live",
            TransportMode::Mock(_) => "mock",
        };
        BTreeMap::from([
            ("endpoint".to_string(), self.endpoint.clone()),
            ("model".to_string(), self.model.clone()),
            ("timeout_secs".to_string(), self.timeout_secs.to_string()),
            ("transport".to_string(), mode.to_string()),
        ])
    }

    /// Builds the configured transport, resolving the API key through `env`.
    pub fn transport(&self, env: impl Fn(&str) -> Option<String>) -> Result<Box<dyn Transport + Send + Sync>> {
        match &self.mode {
            TransportMode::Mock(responses) => Ok(Box::new(if responses.is_empty() {
                MockTransport::echo()
            } else {
                MockTransport::scripted(responses.iter().cloned())
            })),
            TransportMode::Live => {
                let var = self
                    .api_key_env
                    .as_deref()
                    .ok_or_else(|| Error::Config("live transport requires an API key variable".into()))?;
                let key = env(var).ok_or_else(|| Error::Config(format!("environment variable `{var}` is not set")))?;
                Ok(Box::new(HttpTransport {
                    endpoint: self.endpoint.clone(),
                    model: self.model.clone(),
                    api_key: key,
                    timeout_secs: self.timeout_secs,
                    reply_pointer: self.reply_pointer.clone(),
                }))
            }
        }
    }
}

/// Single-shot query: one user message, first reply returned.
pub fn llm_query(prompt: &str, config: &LlmConfig) -> Result<String> {
    if prompt.is_empty() {
        return Err(Error::InvalidArgument("empty prompt".into()));
    }
    let transport = config.transport(|k| std::env::var(k).ok())?;
    transport.complete(&[Turn { role: Role::User, text: prompt.to_string() }])
}

#[derive(Debug, Default)]
pub struct MockTransport {
    responses: Mutex<VecDeque<String>>,
    echo: bool,
    requests: Mutex<Vec<Vec<Turn>>>,
}

impl MockTransport {
    pub fn scripted<S: Into<String>>(responses: impl IntoIterator<Item = S>) -> Self {
        Self {
            responses: Mutex::new(responses.into_iter().map(Into::into).collect()),
            ..Self::default()
        }
    }

    pub fn echo() -> Self {
        Self { echo: true, ..Self::default() }
    }

    /// Every message history received so far.
    pub fn requests(&self) -> Vec<Vec<Turn>> {
        self.requests.lock().unwrap().clone()
    }
}

impl Transport for MockTransport {
    fn complete(&self, messages: &[Turn]) -> Result<String> {
        self.requests.lock().unwrap().push(messages.to_vec());
        if self.echo {
            return Ok(messages.last().map(|t| t.text.clone()).unwrap_or_default());
        }
        self.responses.lock().unwrap().pop_front().ok_or_else(|| Error::Transport {
            status: 0,
            message: "mock transport has no scripted response left".into(),
        })
    }
}

/// OpenAI-compatible chat-completion client.
#[derive(Debug, Clone)]
pub struct HttpTransport {
    pub endpoint: String,
    pub model: String,
    pub api_key: String,
    pub timeout_secs: u64,
    pub reply_pointer: String,
}

const EXCERPT_CHARS: usize = 200;

fn excerpt(s: &str) -> String {
    s.chars().take(EXCERPT_CHARS).collect()
}

fn is_timeout(err: &ureq::Transport) -> bool {
    let mut source = std::error::Error::source(err);
    while let Some(e) = source {
        if let Some(io) = e.downcast_ref::<std::io::Error>() {
            return matches!(io.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock);
        }
        source = e.source();
    }
    err.to_string().contains("timed out")
}

impl Transport for HttpTransport {
    fn complete(&self, messages: &[Turn]) -> Result<String> {
        let body = json!({
            "model": self.model,
            "messages": messages.iter().map(|t| json!({"role": t.role.as_str(), "content": t.text})).collect::<Vec<_>>(),
        });
        let agent = ureq::AgentBuilder::new().timeout(Duration::from_secs(self.timeout_secs)).build();
        let response = agent
            .post(&self.endpoint)
            .set("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(body);
        let response = match response {
            Ok(r) => r,
            Err(ureq::Error::Status(status, r)) => {
                let text = r.into_string().unwrap_or_default();
                return Err(Error::Transport { status, message: excerpt(&text) });
            }
            Err(ureq::Error::Transport(t)) if is_timeout(&t) => return Err(Error::Timeout(self.timeout_secs)),
            Err(ureq::Error::Transport(t)) => return Err(Error::Transport { status: 0, message: t.to_string() }),
        };
        let status = response.status();
        let text = response.into_string().map_err(|e| {
            if matches!(e.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) {
                Error::Timeout(self.timeout_secs)
            } else {
                Error::Transport { status, message: e.to_string() }
            }
        })?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|_| Error::Transport { status, message: format!("malformed response: {}", excerpt(&text)) })?;
        value
            .pointer(&self.reply_pointer)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| Error::Transport { status, message: format!("no reply at {}: {}", self.reply_pointer, excerpt(&text)) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;
    use std::thread;

    fn serve_once(status: &'static str, body: &'static str, delay: Duration) -> (String, thread::JoinHandle<String>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let handle = thread::spawn(move || {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut head = String::new();
            let mut length = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap();
                }
                head.push_str(&line);
                if line == "\r\n" {
                    break;
                }
            }
            let mut body_in = vec![0; length];
            reader.read_exact(&mut body_in).unwrap();
            thread::sleep(delay);
            let mut stream = stream;
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            head + &String::from_utf8(body_in).unwrap()
        });
        (addr, handle)
    }

    fn live(endpoint: String, timeout_secs: u64) -> LlmConfig {
        LlmConfig { endpoint, timeout_secs, mode: TransportMode::Live, api_key_env: Some("KEY".into()), ..LlmConfig::default() }
    }

    #[test]
    fn request_carries_model_and_prompt() {
        let (addr, handle) = serve_once("200 OK", r#"{"choices":[{"message":{"role":"assistant","content":"hi there"}}]}"#, Duration::ZERO);
        let t = live(addr, 5).transport(|_| Some("sk-test".into())).unwrap();
        let prompt = "If I have a process with flow:\n\nA -> B";
        let reply = t.complete(&[Turn { role: Role::User, text: prompt.into() }]).unwrap();
        assert_eq!(reply, "hi there");
        let request = handle.join().unwrap();
        assert!(request.contains("Bearer sk-test"));
        let body: Value = serde_json::from_str(request.split("\r\n\r\n").nth(1).unwrap()).unwrap();
        assert_eq!(body["model"], "gpt-4");
        assert_eq!(body["messages"][0]["content"], prompt);
        assert_eq!(body["messages"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn error_status_is_reported() {
        let (addr, handle) = serve_once("429 Too Many Requests", r#"{"error":"rate limited"}"#, Duration::ZERO);
        let t = live(addr, 5).transport(|_| Some("k".into())).unwrap();
        let err = t.complete(&[Turn { role: Role::User, text: "x".into() }]).unwrap_err();
        assert!(matches!(err, Error::Transport { status: 429, ref message } if message.contains("rate limited")));
        handle.join().unwrap();
    }

    #[test]
    fn slow_server_times_out() {
        let (addr, handle) = serve_once("200 OK", "{}", Duration::from_millis(2500));
        let t = live(addr, 1).transport(|_| Some("k".into())).unwrap();
        let err = t.complete(&[Turn { role: Role::User, text: "x".into() }]).unwrap_err();
        assert!(matches!(err, Error::Timeout(1)), "{err:?}");
        handle.join().unwrap();
    }

    #[test]
    fn live_without_key_is_config_error() {
        let cfg = live("http://127.0.0.1:9".into(), 1);
        assert!(matches!(cfg.transport(|_| None), Err(Error::Config(_))));
        let no_var = LlmConfig { api_key_env: None, ..cfg };
        assert!(matches!(no_var.transport(|_| Some("k".into())), Err(Error::Config(_))));
    }

    #[test]
    fn mock_modes() {
        let cfg = LlmConfig::default();
        assert_eq!(llm_query("ping", &cfg).unwrap(), "ping");
        let scripted = LlmConfig { mode: TransportMode::Mock(vec!["scripted".into()]), ..cfg };
        assert_eq!(llm_query("ping", &scripted).unwrap(), "scripted");
        assert!(llm_query("", &scripted).is_err());
        assert!(!LlmConfig::default().snapshot().values().any(|v| v.contains("OPENAI")));
    }
}
