import json

from mcp.server import Server

from ode_linearizer.log import configure_logging
from ode_linearizer.server import TOOLS, create_server, dispatch, tool_listing


def test_tool_registry():
    assert set(TOOLS) == {
        "classify_ode",
        "compute_invariants",
        "linearize_ode",
        "verify_transformation",
        "classify_linear_ode",
    }
    for config in TOOLS.values():
        assert callable(config["handler"])
        assert config["inputSchema"]["type"] == "object"
        assert set(config["inputSchema"]["required"]) <= set(config["inputSchema"]["properties"])


def test_create_server():
    assert isinstance(create_server(), Server)


def test_tool_listing_follows_the_registry():
    assert [tool.name for tool in tool_listing()] == list(TOOLS)


def test_log_level_from_environment(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "debug")
    assert configure_logging("INFO") == "DEBUG"
    monkeypatch.delenv("LOG_LEVEL")
    assert configure_logging("WARNING") == "WARNING"


async def test_dispatch():
    result = json.loads(await dispatch("classify_ode", {"equation": "u''' = 0"}))
    assert result["verdict"] == "seven"


async def test_dispatch_error_payload():
    result = json.loads(await dispatch("classify_ode", {"equation": "x +"}))
    assert result["error"] is True
    assert result["tool"] == "classify_ode"
    assert "line 1" in result["message"]


async def test_dispatch_unknown_tool():
    assert await dispatch("nope", {}) == "Unknown tool: nope"
