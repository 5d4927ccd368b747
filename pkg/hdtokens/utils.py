"""
Formatting helpers for hdtokens
"""


def format_seconds(seconds: float) -> str:
    """
    Format a duration for report tables.

    Args:
        seconds: Elapsed time in seconds

    Returns:
        Formatted string (e.g., "420 ms", "3.25 s")
    """
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    return f"{seconds:.2f} s"


def truncate_string(s: str, max_length: int, suffix: str = '...') -> str:
    """
    Truncate a string to max length.

    Args:
        s: String to truncate
        max_length: Maximum length
        suffix: Suffix to add if truncated

    Returns:
        Truncated string
    """
    if len(s) <= max_length:
        return s
    return s[:max_length - len(suffix)] + suffix
