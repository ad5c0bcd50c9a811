/** Typed client for the three recommendation endpoints. */

export type ItemKind = 'book' | 'document';
export type Direction = 'to_irrelevant' | 'to_relevant';

export interface RecommendationItem {
  item_id: string;
  item_kind: ItemKind;
  source: 'content_match' | 'cf_partner';
  matched_group: number | null;
  matched_tags: string[];
  score: number;
  title: string;
  detail_url: string | null;
}

export interface TagWeight {
  tag: string;
  weight: number;
}

export interface TagLists {
  relevant_tags: TagWeight[];
  irrelevant_tags: string[];
}

export interface SessionPayload extends TagLists {
  user_id: string;
  generated_at: string;
  items: RecommendationItem[];
}

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    throw new ApiError(response.status, `${response.status} ${response.statusText}`);
  }
  return (await response.json()) as T;
}

export async function fetchRecommendations(base: string, token: string): Promise<SessionPayload> {
  const response = await fetch(`${base}/api/v1/recommendations/${token}`);
  return asJson<SessionPayload>(response);
}

export async function submitRating(
  base: string,
  token: string,
  itemId: string,
  itemKind: ItemKind,
  score: number
): Promise<TagLists> {
  const response = await fetch(`${base}/api/v1/recommendations/${token}/ratings`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ item_id: itemId, item_kind: itemKind, score })
  });
  return asJson<TagLists>(response);
}

export async function reallocateTag(
  base: string,
  token: string,
  tag: string,
  direction: Direction
): Promise<TagLists> {
  const response = await fetch(`${base}/api/v1/recommendations/${token}/tags/reallocate`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ tag, direction })
  });
  return asJson<TagLists>(response);
}
