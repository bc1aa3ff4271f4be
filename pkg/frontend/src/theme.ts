/** Shared visual constants.
 *
 * Keyword chips are colored by origin so teachers can tell recommendations
 * from their own additions at a glance: green for recommended, purple for
 * custom. Components set the color inline from these constants; the
 * stylesheet only carries layout.
 */

export const KEYWORD_COLORS = {
  recommended: "#1a7f37",
  custom: "#8250df",
} as const;

export type KeywordOrigin = keyof typeof KEYWORD_COLORS;
