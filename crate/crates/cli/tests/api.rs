use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ifttpin_cli::service::{router, AppState, ServiceConfig};
use ifttpin_core::{ButtonId, Color, Mode, Session, SessionConfig, Transcript};
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    app_with(ServiceConfig::default())
}

fn app_with(cfg: ServiceConfig) -> Router {
    router(Arc::new(AppState::new(&cfg)))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, v)
}

async fn create(app: &Router, body: Value) -> Value {
    let (s, v) = call(app, "POST", "/api/sessions", Some(body)).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v
}

async fn press(app: &Router, id: &str, button: u8) -> (StatusCode, Value) {
    call(
        app,
        "POST",
        &format!("/api/sessions/{id}/press"),
        Some(json!({ "button": button })),
    )
    .await
}

fn private_mapping() -> Vec<Color> {
    use Color::*;
    vec![Yellow, Gray, Gray, Yellow, Gray, Yellow, Gray, Gray, Yellow]
}

/// The lowest-indexed button the user associates with `c`.
fn button_for(map: &[Color], c: Color) -> u8 {
    map.iter().position(|&m| m == c).unwrap() as u8
}

async fn enter(app: &Router, id: &str, pin: &[u8], map: &[Color]) -> Value {
    let (_, mut state) = call(app, "GET", &format!("/api/sessions/{id}"), None).await;
    for _ in 0..200 {
        if state["status"] != "active" {
            break;
        }
        let target = pin[state["resolved_count"].as_u64().unwrap() as usize] as usize;
        let pattern = state["pattern"].as_str().unwrap();
        let color = Color::from_char(pattern.chars().nth(target).unwrap()).unwrap();
        let (s, v) = press(app, id, button_for(map, color)).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        state = v;
    }
    state
}

#[tokio::test]
async fn iftt_session_resolves_and_reports_true_colors() {
    let app = app();
    let created = create(
        &app,
        json!({ "mode": "iftt", "pin_length": 4, "button_count": 9, "seed": 3 }),
    )
    .await;
    let id = created["id"].as_str().unwrap().to_string();
    assert_eq!(created["pattern"].as_str().unwrap().len(), 10);
    assert_eq!(created["resolved_count"], 0);
    let buttons = created["buttons"].as_array().unwrap();
    assert_eq!(buttons.len(), 9);
    assert!(buttons.iter().all(|b| b["color"] == "unknown"));

    let map = private_mapping();
    let done = enter(&app, &id, &[5, 0, 9, 2], &map).await;
    assert_eq!(done["status"], "completed");
    assert_eq!(done["pin"], "5092");
    assert_eq!(done["event"], "completed");
    assert!(done.get("dashboard").is_none());
    assert!(done.get("last_resolved_digit").is_none());
    let mut committed = 0;
    for b in done["buttons"].as_array().unwrap() {
        let i = b["index"].as_u64().unwrap() as usize;
        match b["color"].as_str().unwrap() {
            "unknown" => {}
            c => {
                assert_eq!(c.chars().next(), Some(map[i].as_char()), "button {i}");
                committed += 1;
            }
        }
    }
    // the user pressed one yellow and one gray button throughout
    assert_eq!(committed, 2);

    let (s, v) = press(&app, &id, 0).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert!(v["error"].is_string());
}

#[tokio::test]
async fn pin_is_withheld_until_completion() {
    let app = app();
    let created = create(&app, json!({ "mode": "iftt", "seed": 1 })).await;
    let id = created["id"].as_str().unwrap();
    let (_, v) = press(&app, id, 0).await;
    assert_eq!(v["status"], "active");
    assert!(v.get("pin").is_none());
    assert!(v.get("last_resolved_digit").is_none());
}

#[tokio::test]
async fn debug_session_exposes_dashboard() {
    let app = app();
    let created = create(
        &app,
        json!({ "mode": "iftt", "pin_length": 1, "button_count": 9, "seed": 8, "debug": true }),
    )
    .await;
    let id = created["id"].as_str().unwrap();
    let dash = created["dashboard"].as_array().unwrap();
    assert_eq!(dash.len(), 10);
    assert!(dash.iter().all(|r| r["consistent"] == true));

    let (_, v) = press(&app, id, 4).await;
    let rows = v["dashboard"].as_array().unwrap();
    // after one press every digit has exactly one color on button 4
    for r in rows {
        assert_eq!(r["buttons"][4].as_array().unwrap().len(), 1);
        assert!(r["buttons"][0].as_array().unwrap().is_empty());
    }

    let done = enter(&app, id, &[6], &private_mapping()).await;
    assert_eq!(done["last_resolved_digit"], 6);
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = app();
    let (s, v) = press(&app, "nope", 1).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert!(v["error"].as_str().unwrap().contains("nope"));
    for uri in ["/api/sessions/nope", "/api/sessions/nope/transcript"] {
        assert_eq!(call(&app, "GET", uri, None).await.0, StatusCode::NOT_FOUND);
    }
    assert_eq!(
        call(&app, "DELETE", "/api/sessions/nope", None).await.0,
        StatusCode::NOT_FOUND
    );
}

#[tokio::test]
async fn bad_requests_are_400() {
    let app = app();
    let (s, v) = call(
        &app,
        "POST",
        "/api/sessions",
        Some(json!({ "mode": "abacus" })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"].is_string());
    let (s, _) = call(
        &app,
        "POST",
        "/api/sessions",
        Some(json!({ "mode": "iftt", "button_count": 1 })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(
        &app,
        "POST",
        "/api/sessions",
        Some(json!({ "mode": "iftt", "pin_length": 0 })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let id = create(&app, json!({ "mode": "iftt", "button_count": 3 })).await["id"]
        .as_str()
        .unwrap()
        .to_string();
    assert_eq!(press(&app, &id, 3).await.0, StatusCode::BAD_REQUEST);
    let (s, _) = call(
        &app,
        "POST",
        &format!("/api/sessions/{id}/press"),
        Some(json!({ "btn": 1 })),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn parallel_sessions_are_independent() {
    let app = app();
    let a = create(&app, json!({ "mode": "iftt", "pin_length": 2, "seed": 11 })).await;
    let b = create(&app, json!({ "mode": "roth", "pin_length": 2, "seed": 12 })).await;
    let (ida, idb) = (a["id"].as_str().unwrap(), b["id"].as_str().unwrap());
    assert_ne!(ida, idb);

    let mut ref_a = Session::start(SessionConfig::new(Mode::Iftt, 2, 9, 11)).unwrap();
    let mut ref_b = Session::start(SessionConfig::new(Mode::Roth, 2, 2, 12)).unwrap();
    for i in 0..6u8 {
        let (sa, sb) = tokio::join!(press(&app, ida, i % 3), press(&app, idb, i % 2));
        ref_a.press(ButtonId(i % 3)).unwrap();
        ref_b.press(ButtonId(i % 2)).unwrap();
        assert_eq!(
            sa.1["pattern"].as_str(),
            ref_a.current_pattern().map(|p| p.to_string()).as_deref()
        );
        assert_eq!(
            sb.1["pattern"].as_str(),
            ref_b.current_pattern().map(|p| p.to_string()).as_deref()
        );
        if !ref_b.is_active() {
            break;
        }
    }
}

#[tokio::test]
async fn transcript_replays_to_same_state() {
    let app = app();
    let id = create(&app, json!({ "mode": "iftt", "pin_length": 2, "seed": 4 })).await["id"]
        .as_str()
        .unwrap()
        .to_string();
    let done = enter(&app, &id, &[3, 7], &private_mapping()).await;
    let (s, t) = call(&app, "GET", &format!("/api/sessions/{id}/transcript"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(t["outcome"], json!({ "status": "completed", "pin": "37" }));
    let t = Transcript::from_json(&t.to_string()).unwrap();
    let replayed = t.replay().unwrap();
    assert_eq!(replayed.pin().as_deref(), Some("37"));
    assert_eq!(
        replayed.click_count() as u64,
        done["click_count"].as_u64().unwrap()
    );

    // same seed, same presses: same bodies apart from id and timestamp
    let again = create(&app, json!({ "mode": "iftt", "pin_length": 2, "seed": 4 })).await;
    let again = enter(
        &app,
        again["id"].as_str().unwrap(),
        &[3, 7],
        &private_mapping(),
    )
    .await;
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("id");
        v.as_object_mut().unwrap().remove("created_at");
        v
    };
    assert_eq!(strip(again), strip(done));
}

#[tokio::test]
async fn delete_then_gone() {
    let app = app();
    let id = create(&app, json!({ "mode": "trad", "pin_length": 1 })).await["id"]
        .as_str()
        .unwrap()
        .to_string();
    let uri = format!("/api/sessions/{id}");
    let (s, v) = call(&app, "DELETE", &uri, None).await;
    assert_eq!((s, v), (StatusCode::NO_CONTENT, Value::Null));
    assert_eq!(call(&app, "GET", &uri, None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn trad_session_has_no_colors() {
    let app = app();
    let v = create(&app, json!({ "mode": "trad", "pin_length": 2 })).await;
    assert_eq!(v["buttons"], json!([]));
    assert_eq!(v["pattern"], Value::Null);
    let id = v["id"].as_str().unwrap();
    press(&app, id, 4).await;
    let (_, v) = press(&app, id, 2).await;
    assert_eq!(v["pin"], "42");
}

#[tokio::test]
async fn idle_sessions_expire() {
    let app = app_with(ServiceConfig {
        seed: 0,
        ttl: Duration::from_millis(20),
    });
    let id = create(&app, json!({ "mode": "iftt" })).await["id"]
        .as_str()
        .unwrap()
        .to_string();
    tokio::time::sleep(Duration::from_millis(60)).await;
    let (s, v) = press(&app, &id, 0).await;
    assert_eq!(s, StatusCode::GONE, "{v}");
    assert_eq!(press(&app, &id, 0).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn unseeded_sessions_follow_service_seed() {
    let seeds = |app: Router| async move {
        let mut out = Vec::new();
        for _ in 0..3 {
            out.push(
                create(&app, json!({ "mode": "iftt" })).await["seed"]
                    .as_u64()
                    .unwrap(),
            );
        }
        out
    };
    let cfg = ServiceConfig {
        seed: 21,
        ..Default::default()
    };
    assert_eq!(
        seeds(app_with(cfg.clone())).await,
        seeds(app_with(cfg)).await
    );
}
