/** Confidence color scale: red at 0 through green at 1. */

export function confidenceColor(value: number): string {
  const clamped = Math.max(0, Math.min(1, value));
  const hue = Math.round(clamped * 120);
  return `hsl(${hue}, 72%, 46%)`;
}

export function confidenceHue(color: string): number {
  const match = /hsl\((\d+),/.exec(color);
  return match ? Number(match[1]) : NaN;
}
