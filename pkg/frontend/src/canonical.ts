/**
 * Canonical JSON: identical values must serialize to identical bytes, and
 * the bytes must match the session server's canonical form exactly
 * (sorted keys, compact separators, ASCII-only escapes). Transcript
 * parity across interfaces is compared on these strings.
 */

const SHORTCUTS: Record<string, string> = {
  '"': '\\"',
  "\\": "\\\\",
  "\b": "\\b",
  "\f": "\\f",
  "\n": "\\n",
  "\r": "\\r",
  "\t": "\\t",
};

function escapeString(s: string): string {
  let out = '"';
  for (let i = 0; i < s.length; i++) {
    const ch = s[i]!;
    const code = s.charCodeAt(i);
    const short = SHORTCUTS[ch];
    if (short !== undefined) {
      out += short;
    } else if (code >= 0x20 && code <= 0x7e) {
      out += ch;
    } else {
      // non-ASCII escapes per UTF-16 unit, so astral chars become pairs
      out += "\\u" + code.toString(16).padStart(4, "0");
    }
  }
  return out + '"';
}

// sort object keys by code point, not UTF-16 unit
function codePointCompare(a: string, b: string): number {
  const ai = [...a];
  const bi = [...b];
  const n = Math.min(ai.length, bi.length);
  for (let k = 0; k < n; k++) {
    const d = ai[k]!.codePointAt(0)! - bi[k]!.codePointAt(0)!;
    if (d !== 0) return d;
  }
  return ai.length - bi.length;
}

export function canonicalJson(value: unknown): string {
  if (value === null) return "null";
  switch (typeof value) {
    case "boolean":
      return value ? "true" : "false";
    case "number":
      if (!Number.isSafeInteger(value)) {
        throw new Error(`only safe integers serialize canonically, got ${value}`);
      }
      return String(value);
    case "string":
      return escapeString(value);
    case "object":
      break;
    default:
      throw new Error(`cannot canonicalize a ${typeof value}`);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  const obj = value as Record<string, unknown>;
  const keys = Object.keys(obj).sort(codePointCompare);
  const parts = keys.map((k) => escapeString(k) + ":" + canonicalJson(obj[k]));
  return "{" + parts.join(",") + "}";
}
