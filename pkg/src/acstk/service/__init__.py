"""HTTP service wrapping the core toolkit: pydantic wire models, pure
request-to-response handlers, and the FastAPI app.  The CLI drives the
same handlers in-process, so both surfaces share one execution path."""
