"""
Token helpers shared by the element, group and bunch grammars.
"""

from typing import Tuple

from layerlat.exceptions import ParseError


def split_pair(text: str, field: str = None) -> Tuple[str, str]:
    """
    Split "(x,y)" into "x" and "y", where x and y may be nested pairs
    """
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError(f"expected a pair '(x,y)', got {text!r}", field=field)

    inner = text[1:-1]
    depth = 0
    for index, char in enumerate(inner):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                break
        elif char == "," and depth == 0:
            return inner[:index].strip(), inner[index + 1:].strip()

    raise ParseError(f"unbalanced pair {text!r}", field=field)


def split_element(text: str, field: str = None) -> Tuple[str, bool, str]:
    """
    Split a chain element "layer:g" / "layer:d:g" into its layer label,
    dotted flag and group element text
    """
    text = text.strip()
    layer, sep, rest = text.partition(":")
    if not sep or not layer or not rest:
        raise ParseError(
            f"expected 'layer:g' or 'layer:d:g', got {text!r}", field=field
        )
    if rest.startswith("d:"):
        return layer, True, rest[2:]
    return layer, False, rest
