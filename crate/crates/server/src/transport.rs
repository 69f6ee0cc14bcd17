//! Blocking HTTP transport for remote property models.

use std::time::Duration;

use serde_json::Value;

use thermoprop::adapter::{AdapterError, Transport};

/// POSTs each request as JSON to one URL.
///
/// A client is built per call so the transport can be dropped from any
/// thread, including inside an async runtime.
#[derive(Debug, Clone)]
pub struct HttpTransport {
    url: String,
    timeout: Duration,
}

impl HttpTransport {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        Self {
            url: url.into(),
            timeout,
        }
    }

    pub fn url(&self) -> &str {
        &self.url
    }
}

impl Transport for HttpTransport {
    fn call(&self, request: &Value) -> Result<Value, AdapterError> {
        let unavailable = |e: reqwest::Error| AdapterError::RemoteUnavailable(format!("{}: {e}", self.url));
        let client = reqwest::blocking::Client::builder()
            .timeout(self.timeout)
            .build()
            .map_err(unavailable)?;
        let response = client.post(&self.url).json(request).send().map_err(unavailable)?;
        let status = response.status();
        if !status.is_success() {
            return Err(AdapterError::RemoteUnavailable(format!("{} answered {status}", self.url)));
        }
        response
            .json::<Value>()
            .map_err(|e| AdapterError::ContractViolation(format!("{} sent a non-JSON reply: {e}", self.url)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_port_is_unavailable() {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let port = listener.local_addr().unwrap().port();
        drop(listener);
        let t = HttpTransport::new(format!("http://127.0.0.1:{port}/"), Duration::from_secs(2));
        let err = t.call(&serde_json::json!({"smiles": ["CCO"]})).unwrap_err();
        assert!(matches!(err, AdapterError::RemoteUnavailable(_)));
    }
}
