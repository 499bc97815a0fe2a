#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace revex {

// Base class for all recoverable toolkit errors. The CLI maps these to
// exit code 2 (data errors); anything else is an internal error (3).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A data-element query with an empty term set cannot be scored.
class EmptyQueryError : public DataError {
public:
    explicit EmptyQueryError(const std::string& what) : DataError(what) {}
};

// A review record names a reference_id with no matching article file.
class MissingDocumentError : public DataError {
public:
    explicit MissingDocumentError(const std::string& what,
                                  std::vector<std::string> ids)
        : DataError(what), missing_ids(std::move(ids)) {}
    std::vector<std::string> missing_ids;
};

// Training requires at least one example of each class.
class SingleClassError : public DataError {
public:
    explicit SingleClassError(const std::string& what) : DataError(what) {}
};

class EmptyCorpusError : public DataError {
public:
    explicit EmptyCorpusError(const std::string& what) : DataError(what) {}
};

class TooFewInstancesError : public DataError {
public:
    explicit TooFewInstancesError(const std::string& what) : DataError(what) {}
};

class MalformedInputError : public DataError {
public:
    explicit MalformedInputError(const std::string& what) : DataError(what) {}
};

}  // namespace revex
