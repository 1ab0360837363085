/** JSON contracts of the triage service API. */
export {};
