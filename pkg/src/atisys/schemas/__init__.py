"""Published schemas for the CLI's stdout documents."""

import json
from importlib import resources


def cli_output_schema(command: str) -> dict:
    """JSON schema for one subcommand's stdout, with shared $defs inlined."""
    doc = json.loads(
        resources.files(__package__).joinpath("cli_outputs.json").read_text()
    )
    if command not in doc["commands"]:
        raise KeyError(f"no schema published for subcommand {command!r}")
    return {"$defs": doc["$defs"], **doc["commands"][command]}
