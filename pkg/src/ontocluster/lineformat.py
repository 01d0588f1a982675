"""Tab-separated line format shared by ontology and schema files.

A line consists of fields separated by single TAB characters. A field value
may be wrapped in double quotes to embed tabs or spaces; a literal quote
inside a quoted value is written doubled (""). Quotes are only meaningful
at the start of a value; a stray quote elsewhere is a syntax error.
"""

TAB = "\t"


class FieldSyntaxError(ValueError):
    pass


def split_fields(line: str) -> list[str]:
    """Split a line into raw field strings, honoring quoted regions so that
    quoted values may contain tabs."""
    fields = []
    buf = []
    in_quotes = False
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < n and line[i + 1] == '"':
                    buf.append('""')
                    i += 2
                    continue
                in_quotes = False
                buf.append(ch)
            else:
                buf.append(ch)
            i += 1
        else:
            if ch == TAB:
                fields.append("".join(buf))
                buf = []
            elif ch == '"':
                in_quotes = True
                buf.append(ch)
            else:
                buf.append(ch)
            i += 1
    if in_quotes:
        raise FieldSyntaxError("unterminated quote")
    fields.append("".join(buf))
    return fields


def parse_value(raw: str) -> str:
    """Decode one field value: either a fully quoted string (kept verbatim,
    "" -> ") or a bare string (surrounding whitespace trimmed)."""
    if raw.startswith('"'):
        if len(raw) < 2 or not raw.endswith('"'):
            raise FieldSyntaxError(f"malformed quoted value: {raw!r}")
        body = raw[1:-1]
        # doubled quotes are the only escape; a lone quote cannot appear
        out = body.replace('""', "\x00")
        if '"' in out:
            raise FieldSyntaxError(f"stray quote in value: {raw!r}")
        return out.replace("\x00", '"')
    if '"' in raw:
        raise FieldSyntaxError(f"stray quote in value: {raw!r}")
    return raw.strip()


def split_keyed(raw: str) -> tuple[str, str]:
    """Split a 'key=value' field; the key is never quoted, the value may be."""
    eq = raw.find("=")
    quote = raw.find('"')
    if eq < 0 or (0 <= quote < eq):
        raise FieldSyntaxError(f"expected key=value, got {raw!r}")
    return raw[:eq].strip(), parse_value(raw[eq + 1 :])


def format_value(value: str) -> str:
    """Encode a value, quoting it when parsing would otherwise mangle it."""
    needs_quote = (
        TAB in value
        or '"' in value
        or value != value.strip()
        or value == ""
    )
    if needs_quote:
        return '"' + value.replace('"', '""') + '"'
    return value
